#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sphq/errors.hpp"
#include "sphq_cli/cache.hpp"
#include "sphq_cli/commands.hpp"
#include "sphq_cli/config.hpp"
#include "sphq_cli/output.hpp"

namespace fs = std::filesystem;
using namespace sphq;
using namespace sphq::cli;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("sphq-test-" + name + "-" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int exit_code(const std::string& args) {
  const std::string cmd = std::string(SPHQ_EXECUTABLE) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Grid, Parsing) {
  EXPECT_EQ(parse_n_grid("64"), (std::vector<int>{64}));
  EXPECT_EQ(parse_n_grid("8,32, 128"), (std::vector<int>{8, 32, 128}));
  EXPECT_EQ(parse_n_grid("64:1024:2"), (std::vector<int>{64, 128, 256, 512, 1024}));
  EXPECT_EQ(parse_n_grid("10:40:1.5"), (std::vector<int>{10, 15, 23, 34}));
  EXPECT_THROW(parse_n_grid("32,8"), ConfigError);
  EXPECT_THROW(parse_n_grid("0"), ConfigError);
  EXPECT_THROW(parse_n_grid("8:4:2"), ConfigError);
  EXPECT_THROW(parse_n_grid("8:64:1"), ConfigError);
  EXPECT_THROW(parse_n_grid("a,b"), ConfigError);
  EXPECT_THROW(parse_n_grid(""), ConfigError);
}

TEST(Config, ObservableList) {
  const auto fs = parse_f_list("x; z^2 ;");
  ASSERT_EQ(fs.size(), 2u);
  EXPECT_EQ(fs[1].coeff(0, 0, 2), cplx(1.0));
}

TEST(Config, PrecedenceDefaultsFileCommandLine) {
  const fs::path dir = scratch("cfg");
  const fs::path file = dir / "run.cfg";
  {
    std::ofstream out(file);
    out << "# comment\nJ = 2.5\nB=0.25  # trailing\nN=16,32\n";
  }
  const RunConfig a = resolve_config("spectrum", file.string(), {"B=0.75"});
  EXPECT_EQ(a.J, 2.5);
  EXPECT_EQ(a.B, 0.75);
  EXPECT_EQ(a.N_grid, (std::vector<int>{16, 32}));
  EXPECT_EQ(a.lambda, 1.0);
  const RunConfig b = resolve_config("spectrum", std::nullopt, {});
  EXPECT_EQ(b.N_grid, default_grid("spectrum"));
  EXPECT_EQ(b.seed, 20240531u);
  fs::remove_all(dir);
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  EXPECT_THROW(resolve_config("spectrum", std::nullopt, {"Jay=1"}), ConfigError);
  EXPECT_THROW(resolve_config("spectrum", std::nullopt, {"J"}), ConfigError);
  EXPECT_THROW(resolve_config("spectrum", std::nullopt, {"J=abc"}), ConfigError);
  EXPECT_THROW(resolve_config("spectrum", std::nullopt, {"model=ising"}), ConfigError);
  EXPECT_THROW(resolve_config("spectrum", std::nullopt, {"cache=maybe"}), ConfigError);
  EXPECT_THROW(resolve_config("spectrum", std::string("/nonexistent/sphq.cfg"), {}), ConfigError);
  for (const auto& k : known_keys()) EXPECT_FALSE(k.empty());
}

TEST(Config, ModelSpecConversion) {
  RunConfig cfg;
  cfg.model = "lmg";
  cfg.gamma = 2.0;
  EXPECT_THROW(cfg.model_spec(), ConfigError);
  cfg.model = "custom";
  EXPECT_THROW(cfg.model_spec(), ConfigError);
  cfg.h0 = "x";
  cfg.h1 = "z";
  const ModelSpec s = cfg.model_spec();
  EXPECT_EQ(s.kind, ModelSpec::Kind::CustomSymbol);
  EXPECT_EQ(s.custom.corrections.size(), 1u);
}

TEST(Output, ShortestRoundTrip) {
  EXPECT_EQ(fmt(0.1), "0.1");
  EXPECT_EQ(fmt(-2.0), "-2");
  const double v = 1.0 / 3.0;
  EXPECT_EQ(std::stod(fmt(v)), v);
  EXPECT_EQ(slug("x^2 + y"), slug("x^2 + y"));
  EXPECT_EQ(slug("z").find('/'), std::string::npos);
}

TEST(Cache, HitIsBitwiseIdentical) {
  const fs::path dir = scratch("cache");
  const ModelSpec spec = ModelSpec::lmg(1.0, 0.5, 0.2);
  ResultCache cache(true, dir);
  const QuantizedOperator a = cache.hamiltonian(spec, 40);
  const Spectrum sa = cache.spectrum(spec, 40);
  EXPECT_GE(cache.misses(), 1u);
  const auto hits = cache.hits();
  const QuantizedOperator b = cache.hamiltonian(spec, 40);
  const Spectrum sb = cache.spectrum(spec, 40);
  EXPECT_EQ(cache.hits(), hits + 2);
  EXPECT_TRUE(a == b);
  EXPECT_TRUE(sa == sb);
  EXPECT_TRUE(a == hamiltonian(spec, 40));
  EXPECT_TRUE(sa == eigh(hamiltonian(spec, 40)));
  EXPECT_NE(ResultCache::key("H", spec, 40), ResultCache::key("H", spec, 41));
  EXPECT_NE(ResultCache::key("H", spec, 40), ResultCache::key("H", ModelSpec::lmg(1.0, 0.5, 0.3), 40));
  fs::remove_all(dir);
}

TEST(Cache, DisabledCacheWritesNothing) {
  const fs::path dir = scratch("nocache");
  ResultCache cache(false, dir);
  cache.hamiltonian(ModelSpec::curie_weiss(1.0, 0.5), 10);
  EXPECT_TRUE(fs::is_empty(dir));
  fs::remove_all(dir);
}

TEST(Commands, OutputsAreByteIdenticalAcrossRuns) {
  const fs::path d1 = scratch("run1"), d2 = scratch("run2");
  for (const std::string sub : {"spectrum", "limit", "fit-symbol"}) {
    RunConfig cfg = resolve_config(sub, std::nullopt, {"N=16:128:2", "cache=off"});
    std::ostringstream sink;
    cfg.out_dir = d1.string();
    EXPECT_EQ(run(cfg, sink), kExitPass) << sub;
    cfg.out_dir = d2.string();
    EXPECT_EQ(run(cfg, sink), kExitPass) << sub;
  }
  int compared = 0;
  for (const auto& e : fs::directory_iterator(d1)) {
    const auto name = e.path().filename();
    if (name == "sphq.log") continue;
    ASSERT_TRUE(fs::exists(d2 / name)) << name;
    EXPECT_EQ(slurp(e.path()), slurp(d2 / name)) << name;
    ++compared;
  }
  EXPECT_GE(compared, 5);
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST(Commands, QuantizeWritesReadableOperator) {
  const fs::path d = scratch("quantize");
  RunConfig cfg = resolve_config("quantize", std::nullopt, {"f=z", "N=6", "format=binary"});
  cfg.out_dir = d.string();
  std::ostringstream sink;
  EXPECT_EQ(run(cfg, sink), kExitPass);
  int found = 0;
  for (const auto& e : fs::directory_iterator(d)) {
    if (e.path().extension() != ".bin") continue;
    std::ifstream in(e.path(), std::ios::binary);
    const QuantizedOperator Q = QuantizedOperator::read_binary(in);
    EXPECT_EQ(Q.N(), 6);
    EXPECT_NEAR(Q(0, 0).real(), 6.0 / 8.0, 1e-14);
    ++found;
  }
  EXPECT_EQ(found, 1);
  fs::remove_all(d);
}

TEST(Executable, ExitCodes) {
  const fs::path d = scratch("exe");
  const std::string out = " out=" + d.string() + " cache=off";
  EXPECT_EQ(exit_code("spectrum N=8,16,32" + out), kExitPass);
  EXPECT_EQ(exit_code("spectrum bogus=1" + out), kExitConfig);
  EXPECT_EQ(exit_code("spectrum J=x" + out), kExitConfig);
  EXPECT_EQ(exit_code("quantize f=w" + out), kExitConfig);
  EXPECT_EQ(exit_code("nosuchcommand"), kExitConfig);
  EXPECT_EQ(exit_code("--help"), kExitPass);
  EXPECT_TRUE(fs::exists(d / "spectrum.csv"));
  fs::remove_all(d);
}
