#include "sgdlab/curvature_probe.hpp"

#include <algorithm>
#include <cmath>

namespace sgdlab {

LineProfile sample_line(const Landscape& landscape, const Vec& start, const Vec& end, int n, double margin) {
  if (n < 16) throw ConfigError("sample_line: need at least 16 samples");
  if (!(margin >= 0.0)) throw ConfigError("sample_line: margin must be >= 0");
  const Vec delta = end - start;
  const double length = delta.norm();
  if (!(length > 0.0)) throw NumericError("sample_line: endpoints coincide");
  LineProfile p{Vec(n), Vec(n), start, end, delta / length, length, landscape};
  const double lo = -margin, hi = length + margin;
  for (int i = 0; i < n; ++i) {
    const double r = (i == n - 1) ? hi : lo + (hi - lo) * i / (n - 1);
    p.r[i] = r;
    p.losses[i] = landscape.loss(p.point(r));
  }
  return p;
}

std::vector<Sample2> reflect_about(const std::vector<Sample2>& samples, double r_min) {
  std::vector<Sample2> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back({2.0 * r_min - s.x, s.y});
  return out;
}

double reflect_fit_curvature(const LineProfile& profile, double r_min, FitSide side, double window) {
  if (!(window > 0.0)) throw ConfigError("reflect_fit_curvature: window must be positive");
  const double toward = (r_min <= 0.5 * profile.length) ? 1.0 : -1.0;
  const double sign = side == FitSide::kTowardOther ? toward : -toward;
  std::vector<Sample2> kept;
  for (Eigen::Index i = 0; i < profile.r.size(); ++i) {
    const double off = sign * (profile.r[i] - r_min);
    if (off > 0.0 && off <= window) kept.push_back({profile.r[i], profile.losses[i]});
  }
  if (kept.size() < 8) {
    throw NumericError("reflect_fit_curvature: only " + std::to_string(kept.size()) +
                       " samples inside the window (need 8)");
  }
  std::vector<Sample2> both = kept;
  const auto mirrored = reflect_about(kept, r_min);
  both.insert(both.end(), mirrored.begin(), mirrored.end());

  const double anchor = profile.loss_at(r_min);
  double sxy = 0.0, sxx = 0.0;
  for (const auto& s : both) {
    const double x2 = (s.x - r_min) * (s.x - r_min);
    sxy += x2 * (s.y - anchor);
    sxx += x2 * x2;
  }
  // y = (c/2) x²  =>  c = 2 Σ x² y / Σ x⁴
  return std::max(0.0, 2.0 * sxy / sxx);
}

double line_curvature_theory(const Mat& hessian, const Vec& shift) {
  const double n2 = shift.squaredNorm();
  if (!(n2 > 0.0)) throw NumericError("line_curvature_theory: zero shift");
  return shift.dot(hessian * shift) / n2;
}

}  // namespace sgdlab
