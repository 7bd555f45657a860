#include "bohmtraj/isochrone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <thread>

#include "bohmtraj/error.hpp"

namespace bohmtraj {

namespace {

struct AnchorOutcome {
  std::optional<Complex> point;
  double residual = 0.0;
  double verified = 0.0;
  std::string reason;
};

AnchorOutcome solve_anchor(const WaveSampler& sampler, double t_f, Complex anchor, double tol) {
  AnchorOutcome out;
  const double re = anchor.real();
  auto offset = [&](double y) { return arrival_offset(sampler, Complex(re, y), t_f, tol); };
  double guess;
  try {
    guess = -t_f * fields_complex(sampler, anchor, 0.0).v.imag();
  } catch (const Error& e) {
    out.reason = "anchor " + std::to_string(re) + ": " + e.what();
    return out;
  }
  if (!std::isfinite(guess)) guess = 0.0;
  double width = std::max(0.05 * sampler.length_scale, 0.5 * std::abs(guess));
  double lo = guess - width, hi = guess + width;
  double f_lo = offset(lo), f_hi = offset(hi);
  int expansions = 0;
  while (!(std::isfinite(f_lo) && std::isfinite(f_hi) && f_lo * f_hi <= 0.0) && expansions < 12) {
    width *= 1.6;
    lo = guess - width;
    hi = guess + width;
    f_lo = offset(lo);
    f_hi = offset(hi);
    ++expansions;
  }
  if (!(std::isfinite(f_lo) && std::isfinite(f_hi) && f_lo * f_hi <= 0.0)) {
    out.reason = "anchor " + std::to_string(re) + ": no sign change of Im x(t_f) near the prediction";
    return out;
  }
  RootOptions ro;
  ro.f_tol = 0.1 * tol;
  ro.x_tol = 1e-15;
  double y;
  try {
    y = root_1d(
        [&](double v) {
          const double f = offset(v);
          if (!std::isfinite(f)) throw NodeError("trajectory failed inside the bracket");
          return f;
        },
        lo, hi, ro);
  } catch (const Error& e) {
    out.reason = "anchor " + std::to_string(re) + ": " + e.what();
    return out;
  }
  const Complex z0(re, y);
  const double residual = std::abs(offset(y));
  if (!(residual <= tol)) {
    out.reason = "anchor " + std::to_string(re) +
                 ": Im x(t_f) jumps across a singular trajectory instead of vanishing";
    return out;
  }
  out.point = z0;
  out.residual = residual;
  out.verified = std::abs(arrival_offset(sampler, z0, t_f, 0.1 * tol));
  return out;
}

}  // namespace

double arrival_offset(const WaveSampler& sampler, Complex z0, double t_f, double tol) {
  TrajectoryOptions opt;
  opt.t0 = 0.0;
  opt.t1 = t_f;
  opt.samples = 2;
  opt.rel_tol = tol;
  opt.abs_tol = 1e-3 * tol;
  try {
    const Trajectory tr = trajectory_complex(sampler, z0, opt);
    if (!tr.completed()) return std::numeric_limits<double>::quiet_NaN();
    return tr.x.back().imag();
  } catch (const Error&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

IsochroneResult find_isochrone(const WaveSampler& sampler, double t_f, const SeedSegment& seed,
                               const IsochroneOptions& options) {
  require_finite(t_f, "arrival time");
  require_finite(seed.start, "seed start");
  require_finite(seed.end, "seed end");
  if (options.n_points < 1) throw DomainError("isochrone needs at least one point");
  if (!(options.tol > 0.0)) throw DomainError("isochrone tolerance must be positive");
  const int n = options.n_points;
  auto anchor = [&](int k) { return seed.at(n == 1 ? 0.0 : static_cast<double>(k) / (n - 1)); };

  IsochroneResult result;
  result.t_f = t_f;
  if (t_f == 0.0) {
    for (int k = 0; k < n; ++k) {
      result.points.push_back(Complex(anchor(k).real(), 0.0));
      result.residuals.push_back(0.0);
      result.verified_residuals.push_back(0.0);
    }
    return result;
  }

  std::vector<AnchorOutcome> outcomes(n);
  const int workers = std::clamp(options.threads, 1, n);
  auto work = [&](int id) {
    for (int k = id; k < n; k += workers) outcomes[k] = solve_anchor(sampler, t_f, anchor(k), options.tol);
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int id = 0; id < workers; ++id) pool.emplace_back(work, id);
    for (auto& th : pool) th.join();
  }

  const double spacing = n > 1 ? std::abs(seed.end - seed.start) / (n - 1) : 0.0;
  for (const auto& o : outcomes) {
    if (!o.point) {
      result.skipped.push_back(o.reason);
      continue;
    }
    if (!result.points.empty() && spacing > 0.0 &&
        std::abs(*o.point - result.points.back()) >= 5.0 * spacing) {
      result.continuous = false;
    }
    result.points.push_back(*o.point);
    result.residuals.push_back(o.residual);
    result.verified_residuals.push_back(o.verified);
  }
  return result;
}

}  // namespace bohmtraj
