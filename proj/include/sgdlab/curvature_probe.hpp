#ifndef SGDLAB_CURVATURE_PROBE_HPP_
#define SGDLAB_CURVATURE_PROBE_HPP_

#include <vector>

#include "sgdlab/core.hpp"
#include "sgdlab/landscape.hpp"

namespace sgdlab {

// Loss sampled along Θ(r) = θ_a + r (θ_b − θ_a)/‖θ_b − θ_a‖, so Θ(0) = θ_a and
// Θ(length) = θ_b.
struct LineProfile {
  Vec r;
  Vec losses;
  Vec start;
  Vec end;
  Vec direction;  // unit
  double length = 0;
  Landscape landscape;

  Vec point(double at) const { return start + at * direction; }
  double loss_at(double at) const { return landscape.loss(point(at)); }
};

// n uniform samples on [−margin, length + margin]. n ≥ 16.
LineProfile sample_line(const Landscape& landscape, const Vec& start, const Vec& end, int n, double margin);

enum class FitSide { kTowardOther, kAway };

struct Sample2 {
  double x;
  double y;
};

// Mirror image of each sample about r_min: r ↦ 2 r_min − r.
std::vector<Sample2> reflect_about(const std::vector<Sample2>& samples, double r_min);

// Least-squares fit of ½ c x² (x = r − r_min, anchored at the loss at r_min,
// no linear term) to the samples on one side of r_min within `window`,
// mirrored about r_min. The "toward" side faces the other endpoint of the
// line. Returns c ≥ 0; throws NumericError with fewer than 8 samples.
double reflect_fit_curvature(const LineProfile& profile, double r_min, FitSide side, double window);

// sᵀ C s / ‖s‖²: curvature of the quadratic model along the shift.
double line_curvature_theory(const Mat& hessian, const Vec& shift);

}  // namespace sgdlab

#endif  // SGDLAB_CURVATURE_PROBE_HPP_
