#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <random>

#include "experiment.hpp"
#include "report.hpp"
#include "sgdlab/curvature_probe.hpp"
#include "sgdlab/diffusion_approx.hpp"
#include "sgdlab/laplace.hpp"
#include "sgdlab/numerics.hpp"
#include "sgdlab/oracle.hpp"
#include "sgdlab/reparam.hpp"
#include "sgdlab/sgd_sim.hpp"
#include "sgdlab/steady_state.hpp"
#include "sgdlab/testloss.hpp"

namespace sgdlab::cli {

namespace fs = std::filesystem;

namespace {

std::string join(const std::string& dir, const std::string& file) { return (fs::path(dir) / file).string(); }

std::string coords(const Vec& v) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? " " : "") + fmt(v[i]);
  return s;
}

void require_1d(const Experiment& e, const std::string& what) {
  if (e.dim != 1) throw ConfigError(what + " supports one-dimensional landscapes only");
}

std::vector<double> to_std(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

// Evenly thinned node indices of an n-node axis (at most `keep`).
std::vector<int> thinned(int n, int keep) {
  const int stride = std::max(1, (n - 1) / std::max(1, keep - 1));
  std::vector<int> out;
  for (int i = 0; i < n; i += stride) out.push_back(i);
  if (out.back() != n - 1) out.push_back(n - 1);
  return out;
}

std::uint64_t sub_seed(std::uint64_t seed, std::uint32_t tag, std::uint32_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), tag, index};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

}  // namespace

int cmd_sweep(const Config& cfg, const std::string& out) {
  const Experiment e = build_experiment(cfg);
  require_1d(e, "sweep");
  const SweepTable table = temperature_sweep(e.pair, e.field, e.temperatures, e.methods, e.sweep);
  const Eigen::Index k = table.rows.front().basin_probs.size();

  std::vector<std::string> header{"T", "method", "E_train", "E_test"};
  for (Eigen::Index i = 0; i < k; ++i) header.push_back("p_basin_" + std::to_string(i));
  for (Eigen::Index i = 0; i < k; ++i) header.push_back("shift_curv_" + std::to_string(i));
  auto cells = [k](const SweepRow& r) {
    std::vector<std::string> c{fmt(r.temperature), method_name(r.method), fmt(r.e_train), fmt(r.e_test)};
    for (Eigen::Index i = 0; i < k; ++i) c.push_back(fmt(r.basin_probs[i]));
    for (Eigen::Index i = 0; i < k; ++i) c.push_back(fmt(r.shift_curv_terms[i]));
    return c;
  };
  std::vector<std::string> header_mc = header;
  for (const char* h : {"E_train_se", "E_test_se", "r_hat"}) header_mc.push_back(h);
  auto cells_mc = [&cells](const SweepRow& r) {
    auto c = cells(r);
    c.push_back(fmt(r.e_train_se));
    c.push_back(fmt(r.e_test_se));
    c.push_back(fmt(r.r_hat));
    return c;
  };

  CsvTable all(header_mc);
  for (const auto& r : table.rows) all.add(cells_mc(r));
  all.write(join(out, "sweep_all.csv"));
  for (Method m : e.methods) {
    const bool mc = m == Method::kSgdMc;
    CsvTable t(mc ? header_mc : header);
    for (const auto& r : table.of(m)) t.add(mc ? cells_mc(r) : cells(r));
    t.write(join(out, "sweep_" + method_name(m) + ".csv"));
  }

  // Objective functions and densities at selected temperatures.
  const Grid grid = Grid::line(e.domain.lo[0], e.domain.hi[0], e.sweep.grid_n);
  const auto keep = thinned(e.sweep.grid_n, 801);
  CsvTable land({"theta", "U_train", "U_test"});
  Series s_tr{"train", {}, {}}, s_te{"test", {}, {}};
  for (int i : keep) {
    const double x = grid.axes[0].at(i);
    const double a = e.pair.train.loss(x), b = e.pair.test.loss(x);
    land.add({fmt(x), fmt(a), fmt(b)});
    s_tr.x.push_back(x);
    s_tr.y.push_back(a);
    s_te.x.push_back(x);
    s_te.y.push_back(b);
  }
  land.write(join(out, "landscape.csv"));

  std::vector<double> dens_t;
  if (cfg.has("output", "density_temperatures")) {
    dens_t = cfg.get_list("output", "density_temperatures");
  } else {
    const auto& t = e.temperatures;
    dens_t = {t.front(), t[t.size() / 2], t.back()};
  }
  std::vector<Series> dens_series;
  for (double T : dens_t) {
    if (!(T > 0.0)) throw ConfigError("[output] density_temperatures must be positive");
    const GriddedDensity d = steady_density(effective_potential(e.pair.train, e.field, T, e.domain), T, grid);
    Series ser{"T=" + fmt(T), {}, {}};
    CsvTable dcsv({"theta", "rho", "v"});
    for (int i : keep) {
      const double x = grid.axes[0].at(i);
      dcsv.add({fmt(x), fmt(d.values[i]), fmt(d.potential[i])});
      ser.x.push_back(x);
      ser.y.push_back(d.values[i]);
    }
    dcsv.write(join(out, "density_T" + fmt(T) + ".csv"));
    dens_series.push_back(std::move(ser));

    MixtureOptions mo;
    mo.grid_n = e.sweep.minima_grid_n;
    const MixtureApprox mix = build_mixture(e.pair.train, e.field, T, e.domain, mo);
    CsvTable mcsv({"k", "mu", "b", "sigma", "w", "v_k"});
    for (size_t c = 0; c < mix.components.size(); ++c) {
      const BasinComponent& b = mix.components[c];
      mcsv.add({std::to_string(c), fmt(b.mu[0]), fmt(b.bias[0]), fmt(std::sqrt(b.cov(0, 0))), fmt(b.weight),
                fmt(b.v_value)});
    }
    mcsv.write(join(out, "mixture_T" + fmt(T) + ".csv"));
  }

  if (std::find(e.methods.begin(), e.methods.end(), Method::kLaplace) != e.methods.end()) {
    MixtureOptions mo;
    mo.grid_n = e.sweep.minima_grid_n;
    const auto records = shift_records(e.pair, e.domain, e.sweep.minima_grid_n);
    CsvTable bcsv({"T", "k", "w", "U_test_k", "shift_curv", "trace_term", "bias_term", "total"});
    for (double T : e.temperatures) {
      const TestLossBreakdown br =
          expected_test_loss_mixture(build_mixture(e.pair.train, e.field, T, e.domain, mo), records);
      for (size_t c = 0; c < br.basins.size(); ++c) {
        const TestLossTerms& t = br.basins[c];
        bcsv.add({fmt(T), std::to_string(c), fmt(t.weight), fmt(t.test_min_loss), fmt(t.shift), fmt(t.covariance),
                  fmt(t.bias), fmt(t.total())});
      }
    }
    bcsv.write(join(out, "breakdown.csv"));
  }

  std::vector<Series> loss_series, prob_series;
  for (Method m : e.methods) {
    const auto rows = table.of(m);
    Series tr{"train (" + method_name(m) + ")", {}, {}}, te{"test (" + method_name(m) + ")", {}, {}};
    for (const auto& r : rows) {
      tr.x.push_back(r.temperature);
      tr.y.push_back(r.e_train);
      te.x.push_back(r.temperature);
      te.y.push_back(r.e_test);
    }
    loss_series.push_back(tr);
    loss_series.push_back(te);
    for (Eigen::Index b = 0; b < k; ++b) {
      Series p{"basin " + std::to_string(b) + " (" + method_name(m) + ")", {}, {}};
      for (const auto& r : rows) {
        p.x.push_back(r.temperature);
        p.y.push_back(r.basin_probs[b]);
      }
      prob_series.push_back(p);
    }
  }
  write_line_chart(join(out, "loss_vs_T.svg"), {e.name + ": expected loss", "T", "loss", true}, loss_series);
  write_line_chart(join(out, "basin_prob_vs_T.svg"), {e.name + ": basin probability", "T", "probability", true},
                   prob_series);
  write_line_chart(join(out, "density.svg"), {e.name + ": steady-state density", "theta", "rho", false},
                   dens_series);
  write_line_chart(join(out, "objective.svg"), {e.name + ": objective", "theta", "U", false}, {s_tr, s_te});

  std::cout << "sweep: " << table.rows.size() << " rows over " << e.temperatures.size() << " temperatures -> "
            << out << "\n";
  return kOk;
}

int cmd_validate(const Config& cfg, const std::string& out) {
  const Experiment e = build_experiment(cfg);
  const int probes = static_cast<int>(cfg.get_int("validate", "probes", 20));
  const int curl_n = static_cast<int>(cfg.get_int("validate", "curl_grid_n", 21));
  struct Check {
    std::string name;
    double value;
    double threshold;
  };
  std::vector<Check> checks;
  checks.push_back({"fd_train_landscape", fd_check(e.pair.train, probes, e.seed, e.domain).max(), 1e-5});
  checks.push_back({"fd_test_landscape", fd_check(e.pair.test, probes, e.seed + 1, e.domain).max(), 1e-5});
  checks.push_back({"fd_diffusion_divergence", fd_check(e.field, probes, e.seed + 2, e.domain).max(), 1e-5});

  const auto& ts = e.temperatures;
  const double t_mid = ts[ts.size() / 2];
  const VectorField drift = [&](const Vec& x) { return effective_drift(e.pair.train, e.field, t_mid, x); };
  checks.push_back({"curl_effective_drift", curl_defect(drift, e.domain, curl_n), 1e-4});
  if (cfg.get_bool("validate", "inject_rotation", false)) {
    const VectorField rot = [](const Vec& x) { return Vec((Vec(2) << -x[1], x[0]).finished()); };
    checks.push_back({"curl_rotation_field", curl_defect(rot, Box::cube(2, -1.0, 1.0), curl_n), 1e-4});
  }
  if (e.dim == 1) {
    for (double T : {ts.front(), t_mid, ts.back()}) {
      const EffectivePotential v = effective_potential(e.pair.train, e.field, T, e.domain);
      const QuadResult q = refined_expectation(v, T, e.domain, e.sweep.grid_n,
                                               [&](const Vec& x) { return e.pair.test.loss(x); });
      checks.push_back({"quadrature_refinement_T=" + fmt(T), q.rel_change, 1e-6});
    }
  }

  CsvTable t({"check", "value", "threshold", "status"});
  bool ok = true;
  for (const auto& c : checks) {
    const bool pass = c.value <= c.threshold;
    ok = ok && pass;
    t.add({c.name, fmt(c.value), fmt(c.threshold), pass ? "PASS" : "FAIL"});
    std::printf("%-36s %-14.6g %-10.3g %s\n", c.name.c_str(), c.value, c.threshold, pass ? "PASS" : "FAIL");
  }
  t.write(join(out, "validate.csv"));
  return ok ? kOk : kCheckFailed;
}

int cmd_probe(const Config& cfg, const std::string& out) {
  const Experiment e = build_experiment(cfg);
  const auto records = shift_records(e.pair, e.domain, e.sweep.minima_grid_n);
  const int n = static_cast<int>(cfg.get_int("probe", "n", 401));
  CsvTable summary({"basin", "train_min", "test_min", "shift_norm", "c_train_toward", "c_train_away", "c_test_toward",
                    "c_test_away", "c_theory", "predicted", "actual", "gap", "rel_gap"});
  for (const auto& rec : records) {
    const double len = rec.shift.norm();
    const double nan = std::nan("");
    double c_tr_to = nan, c_tr_aw = nan, c_te_to = nan, c_te_aw = nan, c_th = nan;
    double predicted = rec.test_min_loss;
    if (len > 0.0) {
      const double margin = cfg.get_double("probe", "margin", len);
      const double window = cfg.get_double("probe", "window", 0.5 * len);
      const LineProfile ptr = sample_line(e.pair.train, rec.train_min, rec.test_min, n, margin);
      const LineProfile pte = sample_line(e.pair.test, rec.train_min, rec.test_min, n, margin);
      c_tr_to = reflect_fit_curvature(ptr, 0.0, FitSide::kTowardOther, window);
      c_tr_aw = reflect_fit_curvature(ptr, 0.0, FitSide::kAway, window);
      c_te_to = reflect_fit_curvature(pte, len, FitSide::kTowardOther, window);
      c_te_aw = reflect_fit_curvature(pte, len, FitSide::kAway, window);
      c_th = line_curvature_theory(rec.test_hessian, rec.shift);
      predicted = rec.test_min_loss + 0.5 * c_te_to * len * len;

      CsvTable prof({"r", "loss_train", "loss_test"});
      Series a{"train", {}, {}}, b{"test", {}, {}};
      for (int i = 0; i < n; ++i) {
        prof.add({fmt(ptr.r[i]), fmt(ptr.losses[i]), fmt(pte.losses[i])});
        a.x.push_back(ptr.r[i]);
        a.y.push_back(ptr.losses[i]);
        b.x.push_back(pte.r[i]);
        b.y.push_back(pte.losses[i]);
      }
      const std::string stem = "probe_profile_" + std::to_string(rec.k);
      prof.write(join(out, stem + ".csv"));
      write_line_chart(join(out, stem + ".svg"), {"loss along the shift, basin " + std::to_string(rec.k), "r", "loss", false},
                       {a, b});
    }
    const double actual = e.pair.test.loss(rec.train_min);
    const double gap = predicted - actual;
    summary.add({std::to_string(rec.k), coords(rec.train_min), coords(rec.test_min), fmt(len), fmt(c_tr_to),
                 fmt(c_tr_aw), fmt(c_te_to), fmt(c_te_aw), fmt(c_th), fmt(predicted), fmt(actual), fmt(gap),
                 fmt(std::abs(gap) / std::max(std::abs(actual), 1e-300))});
    std::printf("basin %d: predicted %.10g actual %.10g gap %.3g\n", rec.k, predicted, actual, gap);
  }
  summary.write(join(out, "probe.csv"));
  return kOk;
}

int cmd_sgd(const Config& cfg, const std::string& out) {
  const Experiment e = build_experiment(cfg);
  require_1d(e, "sgd");
  const double lr = cfg.get_double("sgd", "learning_rate", 1e-3);
  double batch = 0;
  if (cfg.has("sgd", "batch_size")) {
    batch = cfg.get_double("sgd", "batch_size");
  } else {
    batch = lr / cfg.get_double("sgd", "temperature");
  }
  const long steps = cfg.get_int("sgd", "steps", 1000000);
  const long burn = cfg.get_int("sgd", "burn_in", steps / 5);
  const int chains = static_cast<int>(cfg.get_int("sgd", "chains", 4));
  const int bins = static_cast<int>(cfg.get_int("sgd", "bins", 512));
  const long thin = cfg.get_int("sgd", "thin", 10);
  if (chains < 1 || bins < 2) throw ConfigError("[sgd] chains >= 1 and bins >= 2 required");
  Vec init;
  if (cfg.has("sgd", "init")) {
    init = Vec::Constant(1, cfg.get_list("sgd", "init").front());
  } else {
    init = shift_records(e.pair, e.domain, e.sweep.minima_grid_n).front().train_min;
  }

  ChainOptions co;
  co.bins = Axis{e.domain.lo[0], e.domain.hi[0], bins + 1};
  co.keep_trace = true;
  co.thin = thin;
  std::vector<Histogram> hists;
  CsvTable raw({"step", "theta_0"});
  double sum = 0, sum2 = 0;
  long count = 0;
  for (int c = 0; c < chains; ++c) {
    SGDConfig sc;
    sc.learning_rate = lr;
    sc.batch_size = batch;
    sc.steps = steps;
    sc.burn_in = burn;
    sc.seed = sub_seed(e.seed, 1, static_cast<std::uint32_t>(c));
    sc.init = init;
    const ChainResult r = run_chain(e.pair.train, e.field, sc, std::nullopt, co);
    hists.push_back(r.histogram);
    if (c == 0) {
      for (size_t j = 0; j < r.trace.size(); ++j) {
        raw.add({std::to_string(burn + static_cast<long>(j) * thin), fmt(r.trace[j][0])});
      }
    }
    for (const Vec& x : r.trace) {
      sum += x[0];
      sum2 += x[0] * x[0];
      ++count;
    }
  }
  const Histogram h = merge_histograms(hists);
  const double T = lr / batch;

  // Steady-state bin masses on a refined grid.
  const int sub = 32;
  const Grid fine = Grid::line(e.domain.lo[0], e.domain.hi[0], bins * sub + 1);
  const GriddedDensity rho = steady_density(effective_potential(e.pair.train, e.field, T, e.domain), T, fine);
  Vec steady(bins);
  const double dx = fine.axes[0].step();
  for (int b = 0; b < bins; ++b) {
    double m = 0;
    for (int i = b * sub; i < (b + 1) * sub; ++i) m += 0.5 * dx * (rho.values[i] + rho.values[i + 1]);
    steady[b] = m;
  }
  steady /= steady.sum();
  const double l1 = (h.masses - steady).cwiseAbs().sum();

  CsvTable ht({"bin_left", "bin_right", "mass"}), hs({"bin_left", "bin_right", "mass"});
  Series ss{"sgd", {}, {}}, st{"steady state", {}, {}};
  for (int b = 0; b < bins; ++b) {
    ht.add({fmt(h.edges[b]), fmt(h.edges[b + 1]), fmt(h.masses[b])});
    hs.add({fmt(h.edges[b]), fmt(h.edges[b + 1]), fmt(steady[b])});
    const double mid = 0.5 * (h.edges[b] + h.edges[b + 1]);
    ss.x.push_back(mid);
    ss.y.push_back(h.masses[b] / h.bin_width(b));
    st.x.push_back(mid);
    st.y.push_back(steady[b] / h.bin_width(b));
  }
  ht.write(join(out, "sgd_histogram.csv"));
  hs.write(join(out, "steady_histogram.csv"));
  raw.write(join(out, "sgd_trace.csv"));
  const double mean = sum / count;
  const double var = sum2 / count - mean * mean;
  CsvTable s({"temperature", "learning_rate", "batch_size", "steps", "chains", "mean", "variance", "l1_vs_steady"});
  s.add({fmt(T), fmt(lr), fmt(batch), std::to_string(steps), std::to_string(chains), fmt(mean), fmt(var), fmt(l1)});
  s.write(join(out, "sgd_summary.csv"));
  write_line_chart(join(out, "sgd_histogram.svg"), {"SGD histogram vs steady state", "theta", "density", false}, {ss, st});
  std::printf("sgd: T=%.6g mean %.6g variance %.6g L1 vs steady state %.4g\n", T, mean, var, l1);
  return kOk;
}

int cmd_fp(const Config& cfg, const std::string& out) {
  const Experiment e = build_experiment(cfg);
  require_1d(e, "fp");
  const double T = cfg.get_double("fp", "temperature");
  const int cells = static_cast<int>(cfg.get_int("fp", "cells", 2048));
  const double t_end = cfg.get_double("fp", "t_end");
  if (cells < 8 || !(t_end > 0.0) || !(T > 0.0)) throw ConfigError("[fp] needs cells >= 8, t_end > 0, temperature > 0");
  const Axis axis{e.domain.lo[0], e.domain.hi[0], cells + 1};
  const double dt = cfg.get_double("fp", "dt", 0.5 * fp_stable_dt(e.pair.train, e.field, T, axis));
  const double mu = cfg.get_double("fp", "init_mean", 0.0);
  const double sd = cfg.get_double("fp", "init_std", 0.5);
  if (!(sd > 0.0)) throw ConfigError("[fp] init_std must be positive");
  const Grid grid{{axis}};
  Vec rho0(axis.n);
  for (int i = 0; i < axis.n; ++i) rho0[i] = std::exp(-0.5 * std::pow((axis.at(i) - mu) / sd, 2));
  rho0 /= trapezoid(rho0, grid);
  FpOptions fo;
  fo.snapshot_interval = cfg.get_double("fp", "snapshot_interval", t_end / 4);
  const DensityTrace trace = fp_evolve_1d(e.pair.train, e.field, T, axis, dt, t_end, rho0, fo);
  const GriddedDensity steady = steady_density(effective_potential(e.pair.train, e.field, T, e.domain), T, grid);

  CsvTable snaps({"time", "l1_vs_steady", "mass"});
  for (const auto& s : trace.snapshots) {
    snaps.add({fmt(s.time), fmt(l1_distance(s.density, steady.values, grid)), fmt(trapezoid(s.density, grid))});
  }
  snaps.write(join(out, "fp_snapshots.csv"));
  CsvTable tcsv({"time", "theta", "rho"});
  for (const auto& s : trace.snapshots) {
    for (int i : thinned(axis.n, 513)) tcsv.add({fmt(s.time), fmt(axis.at(i)), fmt(s.density[i])});
  }
  tcsv.write(join(out, "fp_trace.csv"));
  CsvTable dens({"theta", "rho_initial", "rho_final", "rho_steady"});
  Series a{"initial", {}, {}}, b{"final", {}, {}}, c{"steady state", {}, {}};
  for (int i : thinned(axis.n, 1025)) {
    const double x = axis.at(i);
    dens.add({fmt(x), fmt(rho0[i]), fmt(trace.final_density()[i]), fmt(steady.values[i])});
    a.x.push_back(x);
    a.y.push_back(rho0[i]);
    b.x.push_back(x);
    b.y.push_back(trace.final_density()[i]);
    c.x.push_back(x);
    c.y.push_back(steady.values[i]);
  }
  dens.write(join(out, "fp_density.csv"));
  write_line_chart(join(out, "fp_density.svg"), {"Fokker-Planck evolution", "theta", "rho", false}, {a, b, c});
  std::printf("fp: T=%.6g dt=%.4g t_end=%.6g final L1 vs steady state %.4g\n", T, dt, t_end,
              l1_distance(trace.final_density(), steady.values, grid));
  return kOk;
}

int cmd_reparam_check(const Config& cfg, const std::string& out) {
  const Experiment e = build_experiment(cfg);
  const double T = cfg.get_double("reparam", "temperature", 0.01);
  const std::string family = cfg.get_string("reparam", "family", "smooth_monotone");
  const auto rep = family == "linear_scale"      ? Reparametrization::linear_scale(e.dim, cfg.get_double("reparam", "scale", 2.0))
                   : family == "smooth_monotone" ? Reparametrization::smooth_monotone(e.dim, cfg.get_double("reparam", "amp", 0.2))
                                                 : throw ConfigError("[reparam] family must be linear_scale or smooth_monotone");
  MixtureOptions mo;
  mo.grid_n = e.sweep.minima_grid_n;
  const MixtureApprox mix = build_mixture(e.pair.train, e.field, T, e.domain, mo);
  const auto records = shift_records(e.pair, e.domain, e.sweep.minima_grid_n);
  const InvarianceReport report = invariance_report(e.pair, mix, records, rep, e.domain);
  CsvTable t({"term", "theta_value", "y_value", "delta"});
  for (const auto& r : report.rows) {
    t.add({r.term, fmt(r.theta_value), fmt(r.y_value), fmt(r.delta)});
    std::printf("%-22s %-22.15g %-22.15g %.3g\n", r.term.c_str(), r.theta_value, r.y_value, r.delta);
  }
  t.write(join(out, "reparam_report.csv"));
  return kOk;
}

int run_command(const std::string& command, const RunOptions& opts) {
  try {
    Config cfg = Config::load(opts.config_path);
    if (opts.seed) {
      cfg.set("", "seed", *opts.seed);
      cfg.get_u64("", "seed");
    }
    if (opts.methods) cfg.set("methods", "list", *opts.methods);
    const std::string out =
        opts.out_dir ? *opts.out_dir : cfg.get_string("output", "dir", "out/" + cfg.get_string("", "name", "run"));
    fs::create_directories(out);
    if (command == "sweep") return cmd_sweep(cfg, out);
    if (command == "validate") return cmd_validate(cfg, out);
    if (command == "probe") return cmd_probe(cfg, out);
    if (command == "sgd") return cmd_sgd(cfg, out);
    if (command == "fp") return cmd_fp(cfg, out);
    if (command == "reparam-check") return cmd_reparam_check(cfg, out);
    throw ConfigError("unknown command " + command);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const DivergenceError& e) {
    std::cerr << "numeric error: " << e.what() << " (step " << e.step() << ")\n";
    return kNumericError;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kNumericError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumericError;
  }
}

}  // namespace sgdlab::cli
