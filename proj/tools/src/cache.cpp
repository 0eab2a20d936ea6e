#include "sphq_cli/cache.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

namespace sphq::cli {

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

ResultCache::ResultCache(bool enabled, std::filesystem::path dir) : enabled_(enabled), dir_(std::move(dir)) {}

std::filesystem::path ResultCache::default_dir() {
  if (const char* env = std::getenv("SPHQ_CACHE_DIR"); env != nullptr && *env != '\0') return env;
  return ".sphq-cache";
}

std::uint64_t ResultCache::key(const std::string& kind, const ModelSpec& spec, int N) {
  return fnv1a(kind + '|' + spec.describe() + '|' + std::to_string(N) + '|' + kCodeVersion);
}

std::filesystem::path ResultCache::path_for(const std::string& kind, const ModelSpec& spec, int N) const {
  char name[40];
  std::snprintf(name, sizeof name, "%016llx.bin", static_cast<unsigned long long>(key(kind, spec, N)));
  return dir_ / kind / name;
}

namespace {

template <class T, class Compute>
T cached(bool enabled, const std::filesystem::path& path, std::atomic<std::uint64_t>& hits,
         std::atomic<std::uint64_t>& misses, Compute compute) {
  if (!enabled) return compute();
  {
    std::ifstream in(path, std::ios::binary);
    if (in) {
      try {
        T v = T::read_binary(in);
        ++hits;
        return v;
      } catch (const std::exception&) {
        // unreadable entry: recompute and overwrite
      }
    }
  }
  ++misses;
  T v = compute();
  std::error_code ec;
  std::filesystem::create_directories(path.parent_path(), ec);
  // write then rename so concurrent readers never see a partial entry
  std::random_device rd;
  const auto tmp = path.string() + ".tmp" + std::to_string(rd());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (out) v.write_binary(out);
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) std::filesystem::remove(tmp, ec);
  return v;
}

}  // namespace

QuantizedOperator ResultCache::hamiltonian(const ModelSpec& spec, int N) {
  return cached<QuantizedOperator>(enabled_, path_for("hamiltonian", spec, N), hits_, misses_,
                                   [&] { return sphq::hamiltonian(spec, N); });
}

Spectrum ResultCache::spectrum(const ModelSpec& spec, int N) {
  return cached<Spectrum>(enabled_, path_for("spectrum", spec, N), hits_, misses_,
                          [&] { return eigh(hamiltonian(spec, N)); });
}

}  // namespace sphq::cli
