#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <string>

#include "sphq/eigensolver.hpp"
#include "sphq/operator.hpp"
#include "sphq/spin_models.hpp"

namespace sphq::cli {

/// Tag folded into every cache key; bump when numerical code changes.
inline constexpr const char* kCodeVersion = "sphq-1.0.0";

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& bytes);

/// On-disk store of Hamiltonians and spectra keyed by a hash of (model, N, code version).
/// Entries are the binary operator and spectrum formats. The directory is $SPHQ_CACHE_DIR
/// when set, else ".sphq-cache". Safe to share between workers.
class ResultCache {
 public:
  ResultCache(bool enabled, std::filesystem::path dir);
  static std::filesystem::path default_dir();

  static std::uint64_t key(const std::string& kind, const ModelSpec& spec, int N);
  std::filesystem::path path_for(const std::string& kind, const ModelSpec& spec, int N) const;

  QuantizedOperator hamiltonian(const ModelSpec& spec, int N);
  Spectrum spectrum(const ModelSpec& spec, int N);

  bool enabled() const { return enabled_; }
  std::uint64_t hits() const { return hits_; }
  std::uint64_t misses() const { return misses_; }

 private:
  bool enabled_;
  std::filesystem::path dir_;
  std::atomic<std::uint64_t> hits_{0};
  std::atomic<std::uint64_t> misses_{0};
};

}  // namespace sphq::cli
