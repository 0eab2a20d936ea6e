#include "sphq_cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <numbers>
#include <sstream>

#include "sphq/eigensolver.hpp"
#include "sphq/errors.hpp"
#include "sphq/parallel.hpp"
#include "sphq/quantize.hpp"
#include "sphq/semiclassics.hpp"
#include "sphq/spectral.hpp"
#include "sphq/sphere_optimize.hpp"
#include "sphq/spin_models.hpp"
#include "sphq_cli/acceptance.hpp"
#include "sphq_cli/cache.hpp"
#include "sphq_cli/output.hpp"
#include "sphq_cli/random.hpp"

namespace sphq::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;
using P = SpherePolynomial;

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = {"axioms", "quantize", "spectrum", "limit", "dgr",
                                                 "husimi", "ssb",      "fit-symbol", "repro"};
  return names;
}

namespace {

struct Context {
  const RunConfig& cfg;
  std::ostream& out;
  std::ofstream log;
  ResultCache cache;
  fs::path dir;

  Context(const RunConfig& c, std::ostream& o)
      : cfg(c), out(o), cache(c.use_cache, ResultCache::default_dir()), dir(c.out_dir) {
    log = open_output(dir / "sphq.log");
    log << "sphq " << cfg.subcommand << " (" << kCodeVersion << ")\n";
  }

  void check(const std::string& name, bool ok, const std::string& detail) {
    log << (ok ? "ok   " : "FAIL ") << name << ": " << detail << '\n';
  }
};

std::vector<P> observables(const RunConfig& cfg, const std::vector<std::string>& fallback) {
  std::vector<P> fs;
  for (const auto& s : cfg.f_list.empty() ? fallback : cfg.f_list) fs.push_back(P::parse(s));
  for (const auto& f : fs)
    if (!f.is_real()) throw ConfigError("observable '" + f.to_string() + "' is not real");
  return fs;
}

StateSelector selector(const RunConfig& cfg) {
  if (cfg.state == "ground") return StateSelector::ground();
  return StateSelector::at_energy(std::stod(cfg.state));
}

EigenPair select_state(const QuantizedOperator& H, const StateSelector& s) {
  return s.kind == StateSelector::Kind::Index ? ground_state(H) : eigenpair_near(H, s.energy);
}

// ---------------------------------------------------------------------------

int cmd_axioms(Context& ctx) {
  Rng rng(ctx.cfg.seed);
  auto csv = open_output(ctx.dir / "axioms.csv");
  csv << "check,N,sample,value,bound,pass\n";
  bool all = true;
  auto row = [&](const char* check, int N, int s, double value, double bound, bool pass) {
    csv << check << ',' << N << ',' << s << ',' << fmt(value) << ',' << fmt(bound) << ',' << (pass ? 1 : 0) << '\n';
    all = all && pass;
    if (!pass) {
      std::ostringstream d;
      d << "N=" << N << " sample=" << s << " value=" << value << " bound=" << bound;
      ctx.check(check, false, d.str());
    }
  };
  for (int N : ctx.cfg.N_grid) {
    const double unit = max_abs_diff(quantize(P::constant(1.0), N), QuantizedOperator::identity(N));
    row("unit", N, 0, unit, 1e-12, unit <= 1e-12);
    for (int s = 0; s < ctx.cfg.samples; ++s) {
      const P f = random_polynomial(rng, 4, true);
      const double adj = max_abs_diff(quantize(f.conj(), N), quantize(f, N).adjoint());
      row("self_adjoint", N, s, adj, 1e-13, adj <= 1e-13);
      const P g = random_polynomial(rng, 4);
      const double sup = sup_norm(g), nrm = operator_norm(quantize(g, N));
      row("norm_bound", N, s, nrm, sup * (1.0 + 1e-9), nrm <= sup * (1.0 + 1e-9));
      const P p = random_polynomial(rng, 2);
      const double me = eigh(quantize((p * p).reduced(), N)).min();
      row("positivity", N, s, me, -1e-10, me >= -1e-10);
      const P a = random_polynomial(rng, 3), b = random_polynomial(rng, 3), c = random_polynomial(rng, 3);
      const double anti = max_coeff_diff(poisson_bracket(a, b), -poisson_bracket(b, a));
      row("bracket_antisymmetry", N, s, anti, 1e-12, anti <= 1e-12);
      const P jac = poisson_bracket(a, poisson_bracket(b, c)) + poisson_bracket(b, poisson_bracket(c, a)) +
                    poisson_bracket(c, poisson_bracket(a, b));
      double jmax = 0.0;
      for (const auto& [m, v] : jac.terms()) jmax = std::max(jmax, std::abs(v));
      row("bracket_jacobi", N, s, jmax, 1e-12, jmax <= 1e-12);
    }
  }
  ctx.check("axiom suite", all, "see axioms.csv");
  ctx.out << "axioms: " << (all ? "all checks passed" : "FAILURES (see sphq.log)") << '\n';
  return all ? kExitPass : kExitInvariant;
}

int cmd_quantize(Context& ctx) {
  if (ctx.cfg.f_list.size() != 1) throw ConfigError("quantize needs exactly one observable f=...");
  const P f = P::parse(ctx.cfg.f_list.front()).reduced();
  const bool binary = ctx.cfg.format == "binary";
  for (int N : ctx.cfg.N_grid) {
    const QuantizedOperator Q = quantize(f, N);
    const fs::path path =
        ctx.dir / ("quantize_" + slug(f.to_string()) + "_N" + std::to_string(N) + (binary ? ".bin" : ".txt"));
    auto os = open_output(path, binary);
    if (binary)
      Q.write_binary(os);
    else
      Q.write_text(os);
    ctx.out << path.string() << '\n';
    ctx.check("quantize", true, "N=" + std::to_string(N) + " halfband=" + std::to_string(Q.halfband()));
  }
  return kExitPass;
}

int cmd_spectrum(Context& ctx) {
  const ModelSpec spec = ctx.cfg.model_spec();
  const SymbolExpansion sym = model_symbol(spec);
  const RealInterval ran = range(sym.h0);
  const auto& grid = ctx.cfg.N_grid;
  std::vector<Spectrum> spectra(grid.size());
  std::vector<WeylReport> weyl(grid.size());
  const bool has_corr = !sym.corrections.empty();
  parallel_for(grid.size(), [&](std::size_t i) {
    spectra[i] = ctx.cache.spectrum(spec, grid[i]);
    if (has_corr) weyl[i] = weyl_check(sym, grid[i]);
  });
  auto csv = open_output(ctx.dir / "spectrum.csv");
  csv << "N,dist,weyl_gap,weyl_bound\n";
  auto all = open_output(ctx.dir / "spectra.csv");
  all << "N,index,eigenvalue\n";
  std::vector<double> xs, ds;
  bool ok = true;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double d = spectrum_distance(ran, spectra[i]);
    xs.push_back(grid[i]);
    ds.push_back(d);
    csv << grid[i] << ',' << fmt(d) << ',' << (has_corr ? fmt(weyl[i].max_gap) : "") << ','
        << (has_corr ? fmt(weyl[i].bound) : "") << '\n';
    spectra[i].write_csv_rows(all, grid[i]);
    if (has_corr) {
      ok = ok && weyl[i].passed;
      ctx.check("weyl N=" + std::to_string(grid[i]), weyl[i].passed,
                "gap " + fmt(weyl[i].max_gap) + " bound " + fmt(weyl[i].bound));
    }
    ctx.check("dist N=" + std::to_string(grid[i]), true, fmt(d));
  }
  write_dat(ctx.dir / "dist.dat", "N", "dist", xs, ds);
  ctx.log << "cache hits " << ctx.cache.hits() << " misses " << ctx.cache.misses() << '\n';
  ctx.out << "model " << spec.describe() << ", ran(h0) = [" << fmt(ran.lo) << ", " << fmt(ran.hi) << "]\n";
  for (std::size_t i = 0; i < grid.size(); ++i) ctx.out << "  N=" << grid[i] << "  dist=" << fmt(ds[i]) << '\n';
  if (!ok) ctx.out << "Weyl check FAILED (see sphq.log)\n";
  return ok ? kExitPass : kExitInvariant;
}

int cmd_limit(Context& ctx) {
  const ModelSpec spec = ctx.cfg.model_spec();
  const auto fs_ = observables(ctx.cfg, {"x", "z^2", "z"});
  const ConvergenceReport rep = convergence_study(spec, selector(ctx.cfg), fs_, ctx.cfg.N_grid);
  auto csv = open_output(ctx.dir / "limit.csv");
  csv << "N,f,value,target,residual\n";
  auto jl = open_output(ctx.dir / "limit.jsonl");
  for (const auto& r : rep.rows()) {
    csv << r.N << ',' << r.f << ',' << fmt(r.value) << ',' << fmt(r.target) << ',' << fmt(r.residual) << '\n';
    jl << json{{"N", r.N}, {"f", r.f}, {"eigenvalue", r.eigenvalue}, {"value", r.value}, {"target", r.target},
               {"residual", r.residual}}
              .dump()
       << '\n';
  }
  std::vector<double> xs(rep.N_grid.begin(), rep.N_grid.end());
  ctx.out << "model " << rep.model << ", limit level " << fmt(rep.limit_energy) << ", "
          << rep.limit_state.points.size() << " support point(s)\n";
  for (const auto& c : rep.curves) {
    write_dat(ctx.dir / ("limit_" + slug(c.f) + ".dat"), "N", "residual", xs, c.residuals);
    ctx.out << "  f=" << c.f << "  target=" << fmt(c.target) << "  final=" << fmt(c.values.back())
            << "  exponent=" << fmt(c.fitted_exponent) << "  " << c.verdict << '\n';
    ctx.check("limit f=" + c.f, c.verdict == "converging", c.verdict);
  }
  if (rep.tracking_failed || !rep.tracking_note.empty()) ctx.log << "note: " << rep.tracking_note << '\n';
  return kExitPass;
}

int cmd_dgr(Context& ctx) {
  const DGRCalibration cal = dgr_calibrate(ctx.cfg.N_small);
  auto ccsv = open_output(ctx.dir / "dgr_calibration.csv");
  ccsv << "convention,ranked,defect_N_small,defect_2N_small\n";
  for (const auto& c : cal.candidates)
    ccsv << c.convention.describe() << ",1," << fmt(c.defect) << ',' << fmt(c.defect_doubled) << '\n';
  for (const auto& c : cal.diagnostics)
    ccsv << c.convention.describe() << ",0," << fmt(c.defect) << ',' << fmt(c.defect_doubled) << '\n';
  ctx.out << "calibrated convention: " << cal.chosen.describe() << " (N_small=" << cal.N_small << ")\n";

  struct Curve {
    std::string kind, f, g;
  };
  const std::vector<Curve> curves = {{"dgr", "x", "y"},     {"dgr", "x", "z"}, {"dgr", "x^2", "y z"},
                                     {"product", "z", "z"}, {"product", "x", "y"}};
  const auto& grid = ctx.cfg.N_grid;
  std::vector<std::vector<double>> vals(curves.size(), std::vector<double>(grid.size()));
  parallel_for(curves.size() * grid.size(), [&](std::size_t job) {
    const std::size_t c = job / grid.size(), i = job % grid.size();
    const P f = P::parse(curves[c].f), g = P::parse(curves[c].g);
    vals[c][i] = curves[c].kind == "dgr" ? dgr_defect(f, g, grid[i], cal.chosen) : product_defect(f, g, grid[i]);
  });
  auto csv = open_output(ctx.dir / "dgr.csv");
  csv << "N,kind,f,g,defect\n";
  std::vector<double> xs(grid.begin(), grid.end());
  bool ok = true;
  for (std::size_t c = 0; c < curves.size(); ++c) {
    for (std::size_t i = 0; i < grid.size(); ++i)
      csv << grid[i] << ',' << curves[c].kind << ',' << curves[c].f << ',' << curves[c].g << ',' << fmt(vals[c][i])
          << '\n';
    write_dat(ctx.dir / (curves[c].kind + "_" + slug(curves[c].f) + "__" + slug(curves[c].g) + ".dat"), "N", "defect",
              xs, vals[c]);
    const std::string verdict = residual_verdict(vals[c], std::numeric_limits<double>::infinity());
    const bool decays = verdict == "converging";
    ok = ok && decays;
    ctx.check(curves[c].kind + " (" + curves[c].f + ", " + curves[c].g + ")", decays,
              "final " + fmt(vals[c].back()) + ", exponent " + fmt(fitted_exponent(grid, vals[c])));
    ctx.out << "  " << curves[c].kind << " (" << curves[c].f << ", " << curves[c].g << "): final " << fmt(vals[c].back())
            << ", exponent " << fmt(fitted_exponent(grid, vals[c])) << '\n';
  }
  return ok ? kExitPass : kExitInvariant;
}

int cmd_husimi(Context& ctx) {
  const ModelSpec spec = ctx.cfg.model_spec();
  const SymbolExpansion sym = model_symbol(spec);
  const StateSelector sel = selector(ctx.cfg);
  const double E = sel.kind == StateSelector::Kind::Index ? range(sym.h0).lo : sel.energy;
  ClassicalLimitState limit;
  try {
    limit = limit_state_prediction(sym.h0, E);
  } catch (const PreconditionError& e) {
    ctx.log << "no limit-state prediction: " << e.what() << '\n';
  }
  auto csv = open_output(ctx.dir / "husimi.csv");
  csv << "N,region,mass,resolution_change,nodes_per_axis\n";
  const SphereRegion everywhere = [](const SpherePoint&) { return true; };
  bool ok = true;
  const int G = ctx.cfg.grid;
  for (int N : ctx.cfg.N_grid) {
    const EigenPair st = select_state(ctx.cache.hamiltonian(spec, N), sel);
    const DickeVector& psi = st.vector;
    auto dat = open_output(ctx.dir / ("husimi_N" + std::to_string(N) + ".dat"));
    dat << "# theta phi density\n";
    std::vector<double> dens(static_cast<std::size_t>(G) * 2 * G);
    parallel_for(static_cast<std::size_t>(G), [&](std::size_t a) {
      const double th = std::numbers::pi * (a + 0.5) / G;
      for (int b = 0; b < 2 * G; ++b)
        dens[a * 2 * G + b] = husimi_density(psi, SpherePoint::from_angles(th, -std::numbers::pi + std::numbers::pi * (b + 0.5) / G));
    });
    for (int a = 0; a < G; ++a)
      for (int b = 0; b < 2 * G; ++b)
        dat << fmt(std::numbers::pi * (a + 0.5) / G) << ' ' << fmt(-std::numbers::pi + std::numbers::pi * (b + 0.5) / G)
            << ' ' << fmt(dens[static_cast<std::size_t>(a) * 2 * G + b]) << '\n';
    auto emit = [&](const std::string& region, const HusimiMass& m) {
      csv << N << ',' << region << ',' << fmt(m.mass) << ',' << fmt(m.resolution_change) << ',' << m.nodes_per_axis
          << '\n';
      if (!m.converged) ctx.check("husimi quadrature " + region + " N=" + std::to_string(N), false, "not converged");
    };
    const HusimiMass total = husimi_mass(psi, everywhere);
    emit("total", total);
    const bool unit = std::abs(total.mass - 1.0) <= 1e-10;
    ok = ok && unit;
    ctx.check("total Husimi mass N=" + std::to_string(N), unit, fmt(total.mass));
    HusimiMass caps_total;
    for (std::size_t i = 0; i < limit.points.size(); ++i) {
      const HusimiMass m = cap_mass(psi, limit.points[i], ctx.cfg.cap_radius);
      emit("cap" + std::to_string(i), m);
      caps_total.mass += m.mass;
    }
    emit("forbidden", forbidden_region_mass(psi, sym.h0, E, ctx.cfg.margin));
    ctx.out << "  N=" << N << "  eigenvalue=" << fmt(st.value) << "  caps=" << fmt(caps_total.mass) << '\n';
  }
  return ok ? kExitPass : kExitInvariant;
}

int cmd_ssb(Context& ctx) {
  const ModelSpec spec = ctx.cfg.model_spec();
  const SSBReport rep = ssb_report(spec, ctx.cfg.N_grid, ctx.cfg.cap_radius);
  auto csv = open_output(ctx.dir / "ssb.csv");
  csv << "N,ground_energy,degenerate,flip_parity,even_defect,odd_defect,husimi_asymmetry,cap_masses,cap_total\n";
  auto jl = open_output(ctx.dir / "ssb.jsonl");
  bool ok = true;
  const bool symmetric = commutes_with_flip(hamiltonian(spec, ctx.cfg.N_grid.front()));
  for (const auto& r : rep.rows) {
    std::string caps;
    for (double m : r.cap_masses) caps += (caps.empty() ? "" : ";") + fmt(m);
    csv << r.N << ',' << fmt(r.ground_energy) << ',' << (r.degenerate ? 1 : 0) << ',' << r.flip_parity << ','
        << fmt(r.z2.even_defect) << ',' << fmt(r.z2.odd_defect) << ',' << fmt(r.z2.husimi_asymmetry) << ',' << caps
        << ',' << fmt(r.cap_total) << '\n';
    jl << json{{"N", r.N},
               {"ground_energy", r.ground_energy},
               {"degenerate", r.degenerate},
               {"flip_parity", r.flip_parity},
               {"pure", true},
               {"even_defect", r.z2.even_defect},
               {"odd_defect", r.z2.odd_defect},
               {"husimi_asymmetry", r.z2.husimi_asymmetry},
               {"cap_masses", r.cap_masses},
               {"cap_total", r.cap_total}}
              .dump()
       << '\n';
    // a flip-symmetric Hamiltonian must have a flip-invariant (up to sign) ground state
    if (symmetric) {
      ok = ok && r.z2.invariant();
      ctx.check("Z2 invariance N=" + std::to_string(r.N), r.z2.invariant(),
                "asymmetry " + fmt(r.z2.husimi_asymmetry));
    }
  }
  ctx.out << rep.verdict << '\n';
  ctx.out << "limit state: " << rep.limit_state.points.size() << " point(s), entropy "
          << fmt(rep.limit_state.entropy()) << '\n';
  return ok ? kExitPass : kExitInvariant;
}

int cmd_fit(Context& ctx) {
  const ModelSpec spec = ctx.cfg.model_spec();
  const SymbolFit fit = symbol_correction_fit(spec, ctx.cfg.N_grid);
  auto csv = open_output(ctx.dir / "fit.csv");
  csv << "N,residual,N2_residual\n";
  for (std::size_t i = 0; i < fit.N_list.size(); ++i)
    csv << fit.N_list[i] << ',' << fmt(fit.residual[i]) << ',' << fmt(fit.scaled_residual[i]) << '\n';
  auto coef = open_output(ctx.dir / "fit_coefficients.csv");
  coef << "a,b,c,fitted,claimed\n";
  for (std::size_t i = 0; i < fit.basis.size(); ++i) {
    const Monomial& m = fit.basis[i];
    coef << m.a << ',' << m.b << ',' << m.c << ',' << fmt(fit.coefficients[i]) << ','
         << fmt(fit.claimed.coeff(m.a, m.b, m.c).real()) << '\n';
  }
  ctx.out << "model " << spec.describe() << '\n';
  ctx.out << "h0         = " << fit.expansion.h0.to_string() << '\n';
  ctx.out << "fitted h1  = " << fit.expansion.corrections.front().symbol.to_string() << '\n';
  if (!fit.claimed.is_zero() || spec.kind != ModelSpec::Kind::CustomSymbol) {
    ctx.out << "claimed h1 = " << fit.claimed.to_string() << '\n';
    ctx.out << "verdict    : " << (fit.agrees_with_claim ? "agree" : "disagree") << " (max coefficient difference "
            << fmt(fit.claimed_difference) << ")\n";
  }
  double worst = 0.0;
  for (double s : fit.scaled_residual) worst = std::max(worst, s);
  ctx.out << "max N^2 * residual = " << fmt(worst) << '\n';
  ctx.check("fit residual", true, "max N^2 residual " + fmt(worst));
  return kExitPass;
}

int cmd_repro(Context& ctx) {
  AcceptanceOptions opts;
  opts.seed = ctx.cfg.seed;
  const auto results = run_acceptance(opts, [&](const CriterionResult& r) {
    ctx.out << format_result(r) << '\n';
    ctx.log << format_result(r) << " (" << r.seconds << " s)\n";
    ctx.log.flush();
  });
  auto csv = open_output(ctx.dir / "repro.csv");
  csv << "id,name,passed\n";
  auto md = open_output(ctx.dir / "repro.md");
  md << "| # | criterion | result | measurements |\n|---|---|---|---|\n";
  bool ok = true;
  for (const auto& r : results) {
    csv << r.id << ",\"" << r.name << "\"," << (r.passed ? 1 : 0) << '\n';
    md << "| " << r.id << " | " << r.name << " | " << (r.passed ? "pass" : "FAIL") << " | " << r.detail << " |\n";
    ok = ok && r.passed;
  }
  ctx.out << (ok ? "all acceptance criteria passed" : "some acceptance criteria FAILED") << '\n';
  return ok ? kExitPass : kExitInvariant;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out) {
  set_worker_count(cfg.workers);
  Context ctx(cfg, out);
  const std::string& s = cfg.subcommand;
  if (s == "axioms") return cmd_axioms(ctx);
  if (s == "quantize") return cmd_quantize(ctx);
  if (s == "spectrum") return cmd_spectrum(ctx);
  if (s == "limit") return cmd_limit(ctx);
  if (s == "dgr") return cmd_dgr(ctx);
  if (s == "husimi") return cmd_husimi(ctx);
  if (s == "ssb") return cmd_ssb(ctx);
  if (s == "fit-symbol") return cmd_fit(ctx);
  if (s == "repro") return cmd_repro(ctx);
  throw ConfigError("unknown subcommand '" + s + "'");
}

}  // namespace sphq::cli
