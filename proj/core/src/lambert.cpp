#include "pnorm/lambert.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <boost/math/special_functions/lambert_w.hpp>

#include "pnorm/errors.hpp"

namespace pnorm {

namespace {

[[noreturn]] void domain(int branch, double x) {
  std::ostringstream msg;
  msg.precision(17);
  msg << "lambert_w: x=" << x << " outside the domain of branch " << branch;
  throw DomainError(msg.str());
}

}  // namespace

double lambert_w(int branch, double x) {
  if (!std::isfinite(x)) domain(branch, x);
  const double branch_point = -std::exp(-1.0);
  try {
    if (branch == 0) {
      if (x < branch_point) domain(branch, x);
      return boost::math::lambert_w0(x);
    }
    if (branch == -1) {
      if (x < branch_point || x >= 0.0) domain(branch, x);
      return boost::math::lambert_wm1(x);
    }
  } catch (const std::domain_error&) {
    domain(branch, x);
  }
  throw DomainError("lambert_w: branch must be 0 or -1");
}

}  // namespace pnorm
