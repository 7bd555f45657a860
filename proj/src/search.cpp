#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "bohmtraj/error.hpp"
#include "bohmtraj/numerics.hpp"

namespace bohmtraj {

double root_1d(const std::function<double(double)>& f, double lo, double hi,
               RootOptions options) {
  if (!(lo < hi)) throw DomainError("root_1d requires lo < hi");
  double a = lo, b = hi;
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (!std::isfinite(fa) || !std::isfinite(fb)) {
    throw BracketError("root_1d: non-finite function value at bracket end");
  }
  if (fa * fb > 0.0) {
    throw BracketError("root_1d: no sign change on [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "]");
  }
  if (std::abs(fa) < std::abs(fb)) {
    std::swap(a, b);
    std::swap(fa, fb);
  }
  double c = a, fc = fa;
  double d = b - a;
  bool bisected = true;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (int it = 0; it < options.max_iterations; ++it) {
    if (std::abs(fb) < options.f_tol) return b;
    double width_tol = options.x_tol + 4.0 * eps * std::abs(b);
    if (std::abs(b - a) < width_tol) return b;

    double s;
    if (fa != fc && fb != fc) {
      // inverse quadratic interpolation
      s = a * fb * fc / ((fa - fb) * (fa - fc)) + b * fa * fc / ((fb - fa) * (fb - fc)) +
          c * fa * fb / ((fc - fa) * (fc - fb));
    } else {
      s = b - fb * (b - a) / (fb - fa);
    }
    double lo_s = (3.0 * a + b) / 4.0;
    bool outside = !((s > std::min(lo_s, b)) && (s < std::max(lo_s, b)));
    bool slow = bisected ? std::abs(s - b) >= std::abs(b - c) / 2.0
                         : std::abs(s - b) >= std::abs(c - d) / 2.0;
    bool tiny = bisected ? std::abs(b - c) < width_tol : std::abs(c - d) < width_tol;
    if (outside || slow || tiny) {
      s = 0.5 * (a + b);
      bisected = true;
    } else {
      bisected = false;
    }
    double fs = f(s);
    d = c;
    c = b;
    fc = fb;
    if (fa * fs < 0.0) {
      b = s;
      fb = fs;
    } else {
      a = s;
      fa = fs;
    }
    if (std::abs(fa) < std::abs(fb)) {
      std::swap(a, b);
      std::swap(fa, fb);
    }
  }
  return b;
}

ExtremumResult extremum_1d(const std::function<double(double)>& f, double lo, double hi,
                           ExtremumOptions options) {
  if (!(lo < hi)) throw DomainError("extremum_1d requires lo < hi");
  const int n = std::max(options.grid_points, 3);
  std::vector<double> xs(n), fs(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = lo + (hi - lo) * i / (n - 1);
    fs[i] = f(xs[i]);
  }
  auto [min_it, max_it] = std::minmax_element(fs.begin(), fs.end());
  const int best = static_cast<int>(max_it - fs.begin());
  ExtremumResult result;
  const double range = *max_it - *min_it;
  if (range <= 1e-15 * std::abs(*max_it)) {
    result.argmax = xs.front();
    result.value = fs.front();
    result.flat = true;
    return result;
  }

  int peaks = 0;
  for (int i = 0; i < n; ++i) {
    bool left = i == 0 || fs[i] > fs[i - 1];
    bool right = i == n - 1 || fs[i] >= fs[i + 1];
    if (left && right && fs[i] - *min_it > 1e-3 * range) ++peaks;
  }
  result.multimodal = peaks > 1;

  double a = xs[std::max(best - 1, 0)];
  double b = xs[std::min(best + 1, n - 1)];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > options.interval_tol) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  double x = 0.5 * (a + b);
  double fx = f(x);
  if (fx >= fs[best]) {
    result.argmax = x;
    result.value = fx;
  } else {
    result.argmax = xs[best];
    result.value = fs[best];
  }
  return result;
}

}  // namespace bohmtraj
