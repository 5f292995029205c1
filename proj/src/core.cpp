#include "sgdlab/core.hpp"

#include <sstream>

#include "sgdlab/log.hpp"

namespace sgdlab {

std::string format_vec(const Vec& v) {
  std::ostringstream os;
  os.precision(10);
  os << '(';
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    os << v[i];
  }
  os << ')';
  return os.str();
}

namespace {
bool g_quiet = false;
}

void set_quiet(bool quiet) { g_quiet = quiet; }

void warn(const std::string& message) {
  if (!g_quiet) std::cerr << "warning: " << message << '\n';
}

}  // namespace sgdlab
