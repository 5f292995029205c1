#ifndef SGDLAB_CORE_HPP_
#define SGDLAB_CORE_HPP_

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace sgdlab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Invalid user input: bad list lengths, unknown keys, malformed values.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computation could not produce a meaningful number (singular matrix,
// domain violation, underflow, instability).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An iterative process left the finite reals. Carries the last finite state.
class DivergenceError : public NumericError {
 public:
  DivergenceError(const std::string& what, long step, Vec last_finite)
      : NumericError(what), step_(step), last_finite_(std::move(last_finite)) {}
  long step() const { return step_; }
  const Vec& last_finite() const { return last_finite_; }

 private:
  long step_;
  Vec last_finite_;
};

// Axis-aligned box [lo_i, hi_i] in R^p.
struct Box {
  Vec lo;
  Vec hi;

  static Box cube(int dim, double lo, double hi) {
    return Box{Vec::Constant(dim, lo), Vec::Constant(dim, hi)};
  }
  int dim() const { return static_cast<int>(lo.size()); }
  Vec center() const { return 0.5 * (lo + hi); }
  bool contains(const Vec& x) const {
    return ((x - lo).array() >= 0.0).all() && ((hi - x).array() >= 0.0).all();
  }
};

std::string format_vec(const Vec& v);

}  // namespace sgdlab

#endif  // SGDLAB_CORE_HPP_
