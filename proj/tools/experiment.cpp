#include "experiment.hpp"

#include <algorithm>
#include <cmath>

namespace sgdlab::cli {

namespace {

Vec to_vec(const std::vector<double>& v) { return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size())); }

Vec sized(const Config& cfg, const std::string& section, const std::string& key, int dim) {
  const auto v = cfg.get_list(section, key);
  if (v.size() == 1) return Vec::Constant(dim, v[0]);
  if (static_cast<int>(v.size()) != dim) {
    throw ConfigError(cfg.origin() + ": [" + section + "] " + key + " needs 1 or " + std::to_string(dim) + " values");
  }
  return to_vec(v);
}

}  // namespace

Landscape landscape_from(const Config& cfg) {
  const std::string kind = cfg.get_string("landscape", "kind", "bumps");
  const int dim = static_cast<int>(cfg.get_int("landscape", "dim", 1));
  if (dim < 1) throw ConfigError(cfg.origin() + ": [landscape] dim must be >= 1");
  if (kind == "bumps") {
    BumpSpec spec;
    const auto minima = cfg.get_list("landscape", "minima");
    if (minima.size() % static_cast<size_t>(dim) != 0) {
      throw ConfigError(cfg.origin() + ": [landscape] minima length is not a multiple of dim");
    }
    for (size_t i = 0; i < minima.size(); i += static_cast<size_t>(dim)) {
      spec.minima.push_back(to_vec(std::vector<double>(minima.begin() + static_cast<long>(i),
                                                       minima.begin() + static_cast<long>(i) + dim)));
    }
    spec.weights = cfg.get_list("landscape", "weights");
    spec.sigmas = cfg.get_list("landscape", "sigmas");
    spec.confinement = cfg.get_double("landscape", "c", 0.0);
    spec.loss_scale = cfg.get_double("landscape", "lscale", 1.0);
    spec.weight_perturb = cfg.get_double("landscape", "wscale", 0.0);
    spec.seed = cfg.get_u64("", "seed");
    const std::string form = cfg.get_string("landscape", "form", "amplitude");
    if (form == "amplitude") spec.form = BumpForm::kAmplitude;
    else if (form == "density") spec.form = BumpForm::kDensity;
    else throw ConfigError(cfg.origin() + ": [landscape] form must be amplitude or density");
    spec.validate();
    return build_landscape(spec);
  }
  if (kind == "quadratic") {
    const auto h = cfg.get_list("landscape", "hessian");
    Mat hm(dim, dim);
    if (static_cast<int>(h.size()) == dim * dim) {
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) hm(i, j) = h[static_cast<size_t>(i * dim + j)];
    } else if (static_cast<int>(h.size()) == dim) {
      hm = to_vec(h).asDiagonal();
    } else {
      throw ConfigError(cfg.origin() + ": [landscape] hessian needs dim or dim*dim values");
    }
    const Vec center = cfg.has("landscape", "center") ? sized(cfg, "landscape", "center", dim) : Vec::Zero(dim);
    return quadratic_landscape(hm, center, cfg.get_double("landscape", "offset", 0.0));
  }
  throw ConfigError(cfg.origin() + ": [landscape] kind must be bumps or quadratic");
}

Vec shift_from(const Config& cfg, int dim) {
  if (cfg.has("shift", "value")) return sized(cfg, "shift", "value", dim);
  if (cfg.has("shift", "stddev_shift")) {
    const double sd = cfg.get_double("shift", "stddev_shift");
    if (!(sd >= 0.0)) throw ConfigError(cfg.origin() + ": [shift] stddev_shift must be >= 0");
    return sample_shift(dim, sd, cfg.get_u64("", "seed"));
  }
  throw ConfigError(cfg.origin() + ": [shift] needs value or stddev_shift");
}

DiffusionField field_from(const Config& cfg, const Landscape& train) {
  const int dim = train.dim();
  const std::string kind = cfg.get_string("diffusion", "kind", "constant");
  std::optional<DiffusionField> base;
  if (kind == "constant") {
    const double d = cfg.get_double("diffusion", "d", 1.0);
    if (!(d > 0.0)) throw ConfigError(cfg.origin() + ": [diffusion] d must be positive");
    base = DiffusionField::constant_scalar(dim, d);
  } else if (kind == "isotropic_of_loss") {
    base = DiffusionField::isotropic_of_loss(noise_shape_from_string(cfg.get_string("diffusion", "shape", "log")),
                                             train);
  } else {
    throw ConfigError(cfg.origin() + ": [diffusion] kind must be constant or isotropic_of_loss");
  }
  const double beta2 = cfg.get_double("diffusion", "beta2", 0.0);
  if (beta2 < 0.0) throw ConfigError(cfg.origin() + ": [diffusion] beta2 must be >= 0");
  if (beta2 > 0.0) return DiffusionField::augmented(*base, beta2);
  return *base;
}

Box domain_from(const Config& cfg, int dim) {
  Box b{sized(cfg, "domain", "lo", dim), sized(cfg, "domain", "hi", dim)};
  if (!((b.hi - b.lo).minCoeff() > 0.0)) throw ConfigError(cfg.origin() + ": [domain] needs lo < hi");
  return b;
}

std::vector<double> temperatures_from(const Config& cfg) {
  if (cfg.has("temperatures", "values")) {
    auto t = cfg.get_list("temperatures", "values");
    for (size_t i = 0; i < t.size(); ++i) {
      if (!(t[i] > 0.0) || (i > 0 && !(t[i] > t[i - 1]))) {
        throw ConfigError(cfg.origin() + ": [temperatures] values must be positive and strictly increasing");
      }
    }
    return t;
  }
  const long count = cfg.get_int("temperatures", "count", 32);
  if (count < 2) throw ConfigError(cfg.origin() + ": [temperatures] count must be >= 2");
  return log_space(cfg.get_double("temperatures", "lo", 1e-4), cfg.get_double("temperatures", "hi", 1.0),
                   static_cast<int>(count));
}

Experiment build_experiment(const Config& cfg) {
  const Landscape train = landscape_from(cfg);
  const int dim = train.dim();
  Experiment e{cfg.get_string("", "name", "experiment"),
               cfg.get_u64("", "seed"),
               dim,
               make_shifted_pair(train, shift_from(cfg, dim)),
               field_from(cfg, train),
               domain_from(cfg, dim),
               temperatures_from(cfg),
               parse_methods(cfg.get_string("methods", "list", "quadrature,laplace")),
               {}};
  SweepOptions& s = e.sweep;
  s.domain = e.domain;
  s.grid_n = static_cast<int>(cfg.get_int("quadrature", "grid_n", 8193));
  s.minima_grid_n = static_cast<int>(cfg.get_int("quadrature", "minima_grid_n", 4096));
  s.threads = static_cast<int>(cfg.get_int("quadrature", "threads", 1));
  s.learning_rate = cfg.get_double("sgd", "learning_rate", 1e-2);
  s.sgd_steps = cfg.get_int("sgd", "steps", 200000);
  s.chains = static_cast<int>(cfg.get_int("sgd", "chains", 8));
  s.thin = cfg.get_int("sgd", "thin", 10);
  s.seed = e.seed;
  if (s.grid_n < 5 || s.grid_n % 2 == 0) throw ConfigError(cfg.origin() + ": [quadrature] grid_n must be odd and >= 5");
  if (s.minima_grid_n < 16) throw ConfigError(cfg.origin() + ": [quadrature] minima_grid_n must be >= 16");
  if (s.chains < 1) throw ConfigError(cfg.origin() + ": [sgd] chains must be >= 1");
  if (s.thin < 1) throw ConfigError(cfg.origin() + ": [sgd] thin must be >= 1");
  if (!(s.learning_rate > 0.0)) throw ConfigError(cfg.origin() + ": [sgd] learning_rate must be positive");
  return e;
}

}  // namespace sgdlab::cli
