#include "sgdlab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <random>
#include <sstream>

#include "sgdlab/laplace.hpp"
#include "sgdlab/numerics.hpp"
#include "sgdlab/sgd_sim.hpp"

namespace sgdlab {

namespace {

Vec eval_on(const Grid& grid, const std::function<double(const Vec&)>& f) {
  Vec out(grid.size());
  for (long i = 0; i < grid.size(); ++i) out[i] = f(grid.point(i));
  return out;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), 1e-300); }

}  // namespace

QuadResult quad_expectation(const GriddedDensity& density, const Vec& f_values) {
  if (f_values.size() != density.values.size()) {
    throw ConfigError("quad_expectation: field has " + std::to_string(f_values.size()) + " samples, density has " +
                      std::to_string(density.values.size()));
  }
  QuadResult out;
  const Vec prod = density.values.cwiseProduct(f_values);
  out.value = trapezoid(prod, density.grid);
  if (density.grid.dim() == 1 && density.grid.axes[0].n % 2 == 1 && density.grid.axes[0].n >= 5) {
    const Axis& ax = density.grid.axes[0];
    const int nc = (ax.n + 1) / 2;
    Vec pc(nc), rc(nc);
    for (int i = 0; i < nc; ++i) {
      pc[i] = prod[2 * i];
      rc[i] = density.values[2 * i];
    }
    const Grid coarse = Grid::line(ax.lo, ax.hi, nc);
    out.coarse = trapezoid(pc, coarse) / trapezoid(rc, coarse);
    out.rel_change = rel(out.value, out.coarse);
  } else {
    out.coarse = out.value;
  }
  return out;
}

QuadResult quad_expectation(const GriddedDensity& density, const std::function<double(const Vec&)>& f) {
  return quad_expectation(density, eval_on(density.grid, f));
}

QuadResult refined_expectation(const EffectivePotential& potential, double temperature, const Box& domain, int n,
                               const std::function<double(const Vec&)>& f) {
  if (domain.dim() != 1) throw ConfigError("refined_expectation: 1D only");
  const Grid g1 = Grid::line(domain.lo[0], domain.hi[0], n);
  const Grid g2 = Grid::line(domain.lo[0], domain.hi[0], 2 * n - 1);
  const GriddedDensity d1 = steady_density(potential, temperature, g1);
  const GriddedDensity d2 = steady_density(potential, temperature, g2);
  QuadResult out;
  out.coarse = quad_expectation(d1, f).value;
  out.value = quad_expectation(d2, f).value;
  out.rel_change = rel(out.value, out.coarse);
  return out;
}

BasinMasses basin_masses(const GriddedDensity& density, const Vec& potential) {
  if (density.grid.dim() != 1) throw ConfigError("basin_masses: 1D only");
  const long n = density.values.size();
  if (potential.size() != n) throw ConfigError("basin_masses: potential and density grids differ");
  const Axis& ax = density.grid.axes[0];
  std::vector<long> maxima;
  int minima = 0;
  for (long i = 1; i + 1 < n; ++i) {
    if (potential[i] > potential[i - 1] && potential[i] >= potential[i + 1]) maxima.push_back(i);
    if (potential[i] < potential[i - 1] && potential[i] <= potential[i + 1]) ++minima;
  }
  if (minima >= 2 && maxima.empty()) throw NumericError("basin_masses: several minima but no interior maximum");

  const Vec w = density.grid.weights();
  BasinMasses out;
  out.masses = Vec::Zero(static_cast<Eigen::Index>(maxima.size()) + 1);
  std::vector<long> edges{0};
  edges.insert(edges.end(), maxima.begin(), maxima.end());
  edges.push_back(n - 1);
  for (size_t b = 0; b + 1 < edges.size(); ++b) {
    double m = 0.0;
    long arg = edges[b];
    for (long i = edges[b]; i <= edges[b + 1]; ++i) {
      const bool shared = (i == edges[b] && b > 0) || (i == edges[b + 1] && b + 2 < edges.size());
      m += (shared ? 0.5 : 1.0) * w[i] * density.values[i];
      if (potential[i] < potential[arg]) arg = i;
    }
    out.masses[static_cast<Eigen::Index>(b)] = m;
    out.minima.push_back(ax.at(static_cast<int>(arg)));
  }
  for (long i : maxima) out.boundaries.push_back(ax.at(static_cast<int>(i)));
  out.masses /= out.masses.sum();
  return out;
}

BasinMasses basin_masses(const GriddedDensity& density) {
  if (density.potential.size() == 0) throw ConfigError("basin_masses: density carries no potential");
  return basin_masses(density, density.potential);
}

std::string method_name(Method m) {
  switch (m) {
    case Method::kQuadrature: return "quadrature";
    case Method::kLaplace: return "laplace";
    case Method::kSgdMc: return "sgd_mc";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  if (name == "quadrature") return Method::kQuadrature;
  if (name == "laplace") return Method::kLaplace;
  if (name == "sgd_mc") return Method::kSgdMc;
  throw ConfigError("unknown method '" + name + "' (expected quadrature, laplace or sgd_mc)");
}

std::vector<Method> parse_methods(const std::string& csv) {
  std::vector<Method> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) continue;
    const Method m = parse_method(item);
    if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
  }
  if (out.empty()) throw ConfigError("no methods selected");
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<SweepRow> SweepTable::of(Method m) const {
  std::vector<SweepRow> out;
  for (const auto& r : rows)
    if (r.method == m) out.push_back(r);
  return out;
}

std::vector<double> log_space(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) throw ConfigError("log_space: need 0 < lo < hi and n >= 2");
  std::vector<double> out(n);
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < n; ++i) out[i] = std::exp(a + (b - a) * i / (n - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> default_temperature_grid() { return log_space(1e-4, 1.0, 32); }

namespace {

std::vector<ShiftRecord> self_records(const std::vector<ShiftRecord>& records, const Landscape& train) {
  std::vector<ShiftRecord> out = records;
  for (auto& r : out) {
    r.test_min = r.train_min;
    r.shift = Vec::Zero(r.train_min.size());
    r.shift_curvature = 0.0;
    r.test_min_loss = train.loss(r.train_min);
    r.test_hessian = train.hessian(r.train_min);
  }
  return out;
}

int nearest_record(const std::vector<ShiftRecord>& records, double x) {
  int best = 0;
  for (size_t k = 1; k < records.size(); ++k)
    if (std::abs(records[k].train_min[0] - x) < std::abs(records[best].train_min[0] - x)) best = static_cast<int>(k);
  return best;
}

int basin_of(const std::vector<double>& boundaries, double x) {
  return static_cast<int>(std::upper_bound(boundaries.begin(), boundaries.end(), x) - boundaries.begin());
}

Vec half_shift_curv(const std::vector<ShiftRecord>& records) {
  Vec out(static_cast<Eigen::Index>(records.size()));
  for (size_t k = 0; k < records.size(); ++k) out[static_cast<Eigen::Index>(k)] = 0.5 * records[k].shift_curvature;
  return out;
}

std::uint64_t chain_seed(std::uint64_t seed, std::size_t row, int chain) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(row), static_cast<std::uint32_t>(chain)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

struct Context {
  const TrainTestPair& pair;
  const DiffusionField& field;
  const std::vector<ShiftRecord>& records;
  const std::vector<ShiftRecord>& train_records;
  const SweepOptions& opts;
};

std::vector<SweepRow> sweep_at(const Context& ctx, double T, std::size_t t_index, const std::vector<Method>& methods) {
  const auto& records = ctx.records;
  const auto& opts = ctx.opts;
  const Eigen::Index K = static_cast<Eigen::Index>(records.size());
  const Vec half_sc = half_shift_curv(records);
  std::vector<SweepRow> rows;

  const bool need_grid =
      std::any_of(methods.begin(), methods.end(), [](Method m) { return m != Method::kLaplace; });
  GriddedDensity density;
  BasinMasses masses;
  if (need_grid) {
    const Grid grid = Grid::line(opts.domain.lo[0], opts.domain.hi[0], opts.grid_n);
    const EffectivePotential v = effective_potential(ctx.pair.train, ctx.field, T, opts.domain);
    density = steady_density(v, T, grid);
    masses = basin_masses(density);
  }

  for (Method m : methods) {
    SweepRow row;
    row.temperature = T;
    row.method = m;
    row.basin_probs = Vec::Zero(K);
    if (m == Method::kQuadrature) {
      row.e_train = quad_expectation(density, [&](const Vec& x) { return ctx.pair.train.loss(x); }).value;
      row.e_test = quad_expectation(density, [&](const Vec& x) { return ctx.pair.test.loss(x); }).value;
      for (Eigen::Index b = 0; b < masses.masses.size(); ++b)
        row.basin_probs[nearest_record(records, masses.minima[static_cast<size_t>(b)])] += masses.masses[b];
    } else if (m == Method::kLaplace) {
      MixtureOptions mo;
      mo.grid_n = opts.minima_grid_n;
      const MixtureApprox mix = build_mixture(ctx.pair.train, ctx.field, T, opts.domain, mo);
      row.e_train = expected_test_loss_mixture(mix, ctx.train_records).total;
      row.e_test = expected_test_loss_mixture(mix, records).total;
      for (const auto& c : mix.components) row.basin_probs[nearest_record(records, c.train_min[0])] += c.weight;
    } else {
      const int chains = opts.chains;
      std::vector<std::vector<double>> tr(chains), te(chains), pos(chains);
      Vec counts = Vec::Zero(K);
      double se_tr = 0.0, se_te = 0.0;
      for (int c = 0; c < chains; ++c) {
        const Vec init = records[static_cast<size_t>(c) % records.size()].train_min;
        SGDConfig cfg = SGDConfig::from_temperature(opts.learning_rate, T, opts.sgd_steps,
                                                    chain_seed(opts.seed, t_index, c), init);
        ChainOptions co;
        co.bins = Axis{opts.domain.lo[0], opts.domain.hi[0], 65};
        co.keep_trace = true;
        co.thin = opts.thin;
        const ChainResult res = run_chain(ctx.pair.train, ctx.field, cfg, std::nullopt, co);
        for (const Vec& x : res.trace) {
          pos[c].push_back(x[0]);
          tr[c].push_back(ctx.pair.train.loss(x));
          te[c].push_back(ctx.pair.test.loss(x));
          const int b = basin_of(masses.boundaries, x[0]);
          counts[nearest_record(records, masses.minima[static_cast<size_t>(b)])] += 1.0;
        }
        const MeanEstimate a = batch_means(tr[c]), b = batch_means(te[c]);
        row.e_train += a.mean / chains;
        row.e_test += b.mean / chains;
        se_tr += a.standard_error * a.standard_error;
        se_te += b.standard_error * b.standard_error;
      }
      row.e_train_se = std::sqrt(se_tr) / chains;
      row.e_test_se = std::sqrt(se_te) / chains;
      row.r_hat = std::max(gelman_rubin(tr), gelman_rubin(pos));
      row.basin_probs = counts / counts.sum();
    }
    row.shift_curv_terms = row.basin_probs.cwiseProduct(half_sc);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

SweepTable temperature_sweep(const TrainTestPair& pair, const DiffusionField& field, const std::vector<double>& temperatures,
                             const std::vector<Method>& methods, const SweepOptions& opts) {
  if (pair.train.dim() != 1) throw ConfigError("temperature_sweep: 1D landscapes only");
  if (temperatures.empty()) throw ConfigError("temperature_sweep: empty temperature grid");
  if (methods.empty()) throw ConfigError("temperature_sweep: no methods");
  for (size_t i = 0; i < temperatures.size(); ++i) {
    if (!(temperatures[i] > 0.0)) throw ConfigError("temperature_sweep: temperatures must be positive");
    if (i > 0 && !(temperatures[i] > temperatures[i - 1]))
      throw ConfigError("temperature_sweep: temperatures must be strictly increasing");
  }
  if (opts.grid_n < 5 || opts.grid_n % 2 == 0) throw ConfigError("temperature_sweep: grid_n must be odd and >= 5");
  if (std::find(methods.begin(), methods.end(), Method::kSgdMc) != methods.end() && opts.chains < 2) {
    throw ConfigError("temperature_sweep: sgd_mc needs at least 2 chains");
  }

  const auto records = shift_records(pair, opts.domain, opts.minima_grid_n);
  if (records.empty()) throw NumericError("temperature_sweep: no train minima in the domain");
  const auto train_records = self_records(records, pair.train);
  const Context ctx{pair, field, records, train_records, opts};

  auto run = [&](std::size_t i) {
    try {
      return sweep_at(ctx, temperatures[i], i, methods);
    } catch (const DivergenceError& e) {
      std::ostringstream msg;
      msg << "T=" << temperatures[i] << ": " << e.what();
      throw NumericError(msg.str());
    } catch (const NumericError& e) {
      std::ostringstream msg;
      msg << "T=" << temperatures[i] << ": " << e.what();
      throw NumericError(msg.str());
    }
  };

  std::vector<std::vector<SweepRow>> per_t(temperatures.size());
  const int threads = std::max(1, opts.threads);
  if (threads == 1) {
    for (size_t i = 0; i < temperatures.size(); ++i) per_t[i] = run(i);
  } else {
    for (size_t start = 0; start < temperatures.size(); start += static_cast<size_t>(threads)) {
      std::vector<std::future<std::vector<SweepRow>>> jobs;
      const size_t stop = std::min(temperatures.size(), start + static_cast<size_t>(threads));
      for (size_t i = start; i < stop; ++i) jobs.push_back(std::async(std::launch::async, run, i));
      for (size_t i = start; i < stop; ++i) per_t[i] = jobs[i - start].get();
    }
  }
  SweepTable table;
  for (auto& rows : per_t)
    for (auto& r : rows) table.rows.push_back(std::move(r));
  return table;
}

namespace {

Vec draw(const Box& box, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vec x(box.dim());
  for (int i = 0; i < box.dim(); ++i) x[i] = box.lo[i] + u(rng) * (box.hi[i] - box.lo[i]);
  return x;
}

double mixed_error(const Mat& a, const Mat& fd) {
  return (a - fd).cwiseAbs().maxCoeff() / std::max(1.0, a.cwiseAbs().maxCoeff());
}

}  // namespace

FdReport fd_check(const Landscape& landscape, int probe_count, std::uint64_t seed, const Box& box) {
  if (box.dim() != landscape.dim()) throw ConfigError("fd_check: box dimension mismatch");
  std::mt19937_64 rng(seed);
  FdReport out;
  const double h = 1e-5;
  for (int i = 0; i < probe_count; ++i) {
    const Vec x = draw(box, rng);
    const Vec g = landscape.grad(x);
    const Vec gfd = fd_gradient([&](const Vec& y) { return landscape.loss(y); }, x, h);
    out.gradient = std::max(out.gradient, mixed_error(g, gfd));
    const Mat hs = landscape.hessian(x);
    const Mat hfd = fd_jacobian([&](const Vec& y) { return landscape.grad(y); }, x, h);
    out.hessian = std::max(out.hessian, mixed_error(hs, hfd));
    ++out.probes;
  }
  return out;
}

FdReport fd_check(const DiffusionField& field, int probe_count, std::uint64_t seed, const Box& box) {
  if (box.dim() != field.dim()) throw ConfigError("fd_check: box dimension mismatch");
  std::mt19937_64 rng(seed);
  FdReport out;
  const int p = field.dim();
  const double h = 1e-5;
  int attempts = 0;
  while (out.probes < probe_count && attempts < 100 * probe_count) {
    ++attempts;
    const Vec x = draw(box, rng);
    DiffusionEval e;
    Vec fd = Vec::Zero(p);
    try {
      e = field.eval(x);
      for (int j = 0; j < p; ++j) {
        Vec xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        fd += (field.matrix(xp).col(j) - field.matrix(xm).col(j)) / (2.0 * h);
      }
    } catch (const NumericError&) {
      continue;
    }
    out.divergence = std::max(out.divergence, mixed_error(e.div, fd));
    ++out.probes;
  }
  return out;
}

}  // namespace sgdlab
