#include "reeb/sections/florio.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "reeb/flow/winding.hpp"
#include "reeb/util/errors.hpp"
#include "reeb/util/parallel.hpp"

namespace reeb::sections {

FlorioReport florio_check(const IsotopyPath& f, Complex x, Complex y, double T, int samples, double h) {
  if (std::abs(y - x) == 0) throw PreconditionError("x and y must differ");
  if (samples < 2) throw PreconditionError("need at least two scan samples");
  const Complex d = y - x;
  FlorioReport r;
  {
    const auto fx = f(x), fy = f(y);
    r.left = flow::winding([&](double t) { return fy(t) - fx(t); }, 0.0, T);
  }
  auto right = [&](double u) {
    const Complex z = x + u * d;
    const auto fp = f(z + h * d), fm = f(z - h * d);
    return flow::winding([&](double t) { return (fp(t) - fm(t)) / (2 * h); }, 0.0, T);
  };
  std::vector<double> us(std::size_t(samples) + 1), vals(us.size());
  for (std::size_t i = 0; i < us.size(); ++i) us[i] = double(i) / samples;
  util::parallel_for(us.size(), [&](std::size_t i) { vals[i] = right(us[i]); });
  r.right_min = *std::min_element(vals.begin(), vals.end());
  r.right_max = *std::max_element(vals.begin(), vals.end());
  r.contained = r.left >= r.right_min - 1e-9 && r.left <= r.right_max + 1e-9;
  // nearest sample, then bisection on a bracketing interval if there is one
  std::size_t best = 0;
  for (std::size_t i = 1; i < vals.size(); ++i)
    if (std::abs(vals[i] - r.left) < std::abs(vals[best] - r.left)) best = i;
  double bu = us[best], bv = vals[best];
  for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
    if ((vals[i] - r.left) * (vals[i + 1] - r.left) >= 0) continue;
    double a = us[i], b = us[i + 1], fa = vals[i] - r.left;
    for (int it = 0; it < 40; ++it) {
      const double m = 0.5 * (a + b), fm = right(m) - r.left;
      if (std::abs(fm) < std::abs(bv - r.left)) { bu = m; bv = fm + r.left; }
      if ((fa < 0) == (fm < 0)) { a = m; fa = fm; } else b = m;
    }
    break;
  }
  r.witness = x + bu * d;
  r.gap = std::abs(bv - r.left);
  return r;
}

} // namespace reeb::sections
