#ifndef SGDLAB_TOOLS_EXPERIMENT_HPP_
#define SGDLAB_TOOLS_EXPERIMENT_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "sgdlab/diffusion.hpp"
#include "sgdlab/landscape.hpp"
#include "sgdlab/oracle.hpp"

namespace sgdlab::cli {

// Everything a command needs, resolved from a Config.
struct Experiment {
  std::string name;
  std::uint64_t seed = 0;
  int dim = 1;
  TrainTestPair pair;
  DiffusionField field;
  Box domain;
  std::vector<double> temperatures;
  std::vector<Method> methods;
  SweepOptions sweep;
};

Landscape landscape_from(const Config& cfg);
Vec shift_from(const Config& cfg, int dim);
DiffusionField field_from(const Config& cfg, const Landscape& train);
Box domain_from(const Config& cfg, int dim);
std::vector<double> temperatures_from(const Config& cfg);

Experiment build_experiment(const Config& cfg);

}  // namespace sgdlab::cli

#endif  // SGDLAB_TOOLS_EXPERIMENT_HPP_
