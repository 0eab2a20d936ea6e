#include "sphq_cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "sphq/errors.hpp"

namespace sphq::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto t = trim(v);
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  if (ec != std::errc() || p != t.data() + t.size() || t.empty())
    throw ConfigError("key '" + key + "': '" + v + "' is not a number");
  return out;
}

long long to_int(const std::string& key, const std::string& v) {
  long long out = 0;
  const auto t = trim(v);
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  if (ec != std::errc() || p != t.data() + t.size() || t.empty())
    throw ConfigError("key '" + key + "': '" + v + "' is not an integer");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  const auto t = trim(v);
  if (t == "1" || t == "on" || t == "true" || t == "yes") return true;
  if (t == "0" || t == "off" || t == "false" || t == "no") return false;
  throw ConfigError("key '" + key + "': '" + v + "' is not a boolean (on/off)");
}

double positive(const std::string& key, double v) {
  if (!(v > 0.0)) throw ConfigError("key '" + key + "' must be positive");
  return v;
}

}  // namespace

std::vector<int> parse_n_grid(const std::string& text) {
  const std::string t = trim(text);
  std::vector<int> out;
  if (t.empty()) throw ConfigError("empty N grid");
  if (t.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(t);
    std::string part;
    while (std::getline(ss, part, ':')) parts.push_back(part);
    if (parts.size() != 3) throw ConfigError("N grid '" + t + "' must be start:stop:factor");
    const long long start = to_int("N", parts[0]), stop = to_int("N", parts[1]);
    const double factor = to_double("N", parts[2]);
    if (start < 1 || stop < start || !(factor > 1.0))
      throw ConfigError("N grid '" + t + "' needs 1 <= start <= stop and factor > 1");
    double v = static_cast<double>(start);
    while (v <= static_cast<double>(stop) * (1.0 + 1e-12)) {
      const int n = static_cast<int>(std::llround(v));
      if (out.empty() || n > out.back()) out.push_back(n);
      v *= factor;
    }
  } else {
    std::stringstream ss(t);
    std::string part;
    while (std::getline(ss, part, ',')) {
      const long long n = to_int("N", part);
      if (n < 1 || n > 1 << 20) throw ConfigError("N values must lie in [1, 2^20]");
      out.push_back(static_cast<int>(n));
    }
  }
  for (std::size_t i = 1; i < out.size(); ++i)
    if (out[i] <= out[i - 1]) throw ConfigError("N grid must be strictly increasing");
  return out;
}

std::vector<SpherePolynomial> parse_f_list(const std::string& text) {
  std::vector<SpherePolynomial> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ';')) {
    const std::string t = trim(part);
    if (t.empty()) continue;
    out.push_back(SpherePolynomial::parse(t));
  }
  return out;
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "model", "J",     "B",      "lambda",  "gamma", "h0",      "h1",   "N",    "f",     "state",
      "cap_radius", "margin", "N_small", "format", "grid", "samples", "out", "cache", "seed", "workers"};
  return keys;
}

void apply_settings(RunConfig& cfg, const std::map<std::string, std::string>& settings) {
  for (const auto& [key, value] : settings) {
    if (key == "model") {
      const auto v = trim(value);
      if (v != "cw" && v != "lmg" && v != "custom") throw ConfigError("model must be cw, lmg or custom");
      cfg.model = v;
    } else if (key == "J") {
      cfg.J = to_double(key, value);
    } else if (key == "B") {
      cfg.B = to_double(key, value);
    } else if (key == "lambda") {
      cfg.lambda = to_double(key, value);
    } else if (key == "gamma") {
      cfg.gamma = to_double(key, value);
    } else if (key == "h0") {
      cfg.h0 = trim(value);
    } else if (key == "h1") {
      cfg.h1 = trim(value);
    } else if (key == "N") {
      cfg.N_grid = parse_n_grid(value);
    } else if (key == "f") {
      cfg.f_list.clear();
      for (const auto& p : parse_f_list(value)) cfg.f_list.push_back(p.to_string());
      if (cfg.f_list.empty()) throw ConfigError("f list is empty");
    } else if (key == "state") {
      const auto v = trim(value);
      if (v != "ground") to_double(key, v);
      cfg.state = v;
    } else if (key == "cap_radius") {
      cfg.cap_radius = positive(key, to_double(key, value));
    } else if (key == "margin") {
      cfg.margin = positive(key, to_double(key, value));
    } else if (key == "N_small") {
      const auto n = to_int(key, value);
      if (n < 2 || n > 1 << 16) throw ConfigError("N_small must lie in [2, 65536]");
      cfg.N_small = static_cast<int>(n);
    } else if (key == "format") {
      const auto v = trim(value);
      if (v != "text" && v != "binary") throw ConfigError("format must be text or binary");
      cfg.format = v;
    } else if (key == "grid") {
      const auto n = to_int(key, value);
      if (n < 4 || n > 4096) throw ConfigError("grid must lie in [4, 4096]");
      cfg.grid = static_cast<int>(n);
    } else if (key == "samples") {
      const auto n = to_int(key, value);
      if (n < 1 || n > 100000) throw ConfigError("samples must lie in [1, 100000]");
      cfg.samples = static_cast<int>(n);
    } else if (key == "out") {
      cfg.out_dir = trim(value);
      if (cfg.out_dir.empty()) throw ConfigError("out must not be empty");
    } else if (key == "cache") {
      cfg.use_cache = to_bool(key, value);
    } else if (key == "seed") {
      const auto n = to_int(key, value);
      if (n < 0) throw ConfigError("seed must be non-negative");
      cfg.seed = static_cast<std::uint64_t>(n);
    } else if (key == "workers") {
      const auto n = to_int(key, value);
      if (n < 0 || n > 1024) throw ConfigError("workers must lie in [0, 1024]");
      cfg.workers = static_cast<unsigned>(n);
    } else {
      throw ConfigError("unknown key '" + key + "'");
    }
  }
}

std::map<std::string, std::string> parse_assignments(const std::vector<std::string>& tokens) {
  std::map<std::string, std::string> out;
  for (const auto& tok : tokens) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("expected key=value, got '" + tok + "'");
    out[trim(tok.substr(0, eq))] = tok.substr(eq + 1);
  }
  return out;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
    out[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return out;
}

std::vector<int> default_grid(const std::string& subcommand) {
  if (subcommand == "axioms") return {8, 32, 128};
  if (subcommand == "quantize") return {16};
  if (subcommand == "spectrum") return parse_n_grid("64:4096:2");
  if (subcommand == "dgr") return parse_n_grid("64:512:2");
  if (subcommand == "ssb") return parse_n_grid("64:512:2");
  if (subcommand == "fit-symbol") return parse_n_grid("16:256:2");
  return parse_n_grid("64:1024:2");
}

RunConfig resolve_config(const std::string& subcommand, const std::optional<std::string>& config_file,
                         const std::vector<std::string>& assignments) {
  RunConfig cfg;
  cfg.subcommand = subcommand;
  if (config_file) apply_settings(cfg, read_config_file(*config_file));
  apply_settings(cfg, parse_assignments(assignments));
  if (cfg.N_grid.empty()) cfg.N_grid = default_grid(subcommand);
  return cfg;
}

ModelSpec RunConfig::model_spec() const {
  if (model == "cw") return ModelSpec::curie_weiss(J, B);
  if (model == "lmg") {
    try {
      return ModelSpec::lmg(lambda, gamma, B);
    } catch (const PreconditionError& e) {
      throw ConfigError(e.what());
    }
  }
  if (h0.empty()) throw ConfigError("model=custom needs h0");
  SymbolExpansion h;
  h.h0 = SpherePolynomial::parse(h0).reduced();
  if (!h1.empty()) h.corrections.push_back({1, SpherePolynomial::parse(h1).reduced(), "user"});
  if (!h.is_real()) throw ConfigError("custom symbols must be real");
  return ModelSpec::custom_symbol(std::move(h));
}

}  // namespace sphq::cli
