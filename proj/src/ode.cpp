#include <algorithm>
#include <cmath>
#include <limits>
#include <initializer_list>
#include <string>
#include <utility>

#include "bohmtraj/error.hpp"
#include "bohmtraj/ode.hpp"

namespace bohmtraj {

const char* to_string(OdeStatus status) {
  switch (status) {
    case OdeStatus::Completed:
      return "completed";
    case OdeStatus::StepUnderflow:
      return "step-underflow";
    case OdeStatus::StepLimit:
      return "step-limit";
  }
  return "unknown";
}

std::vector<double> linspace(double t0, double t1, std::size_t n) {
  if (n < 2) throw DomainError("linspace needs at least two points");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  out.back() = t1;
  return out;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Dense output (Hairer's contd5).
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

bool all_finite(std::span<const Complex> v) {
  return std::all_of(v.begin(), v.end(), [](Complex z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

double scaled_norm(std::span<const Complex> v, std::span<const Complex> y, double rel, double abs) {
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    double sk = abs + rel * std::abs(y[i]);
    double r = std::abs(v[i]) / sk;
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(v.size()));
}

class Stepper {
 public:
  explicit Stepper(const OdeProblem& p) : p_(p), n_(p.y0.size()) {
    for (auto* k : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &tmp_, &ynew_, &r5_}) k->resize(n_);
  }

  OdeState k1_, k2_, k3_, k4_, k5_, k6_, k7_, tmp_, ynew_, r5_;

  void eval(double t, std::span<const Complex> y, OdeState& out) {
    p_.rhs(t, y, out);
    if (!all_finite(out)) throw SingularityError("right-hand side is not finite");
  }

  // Trial step from (t, y) with derivative k1_ already set. Returns error norm.
  double step(double t, const OdeState& y, double h) {
    auto combo = [&](std::initializer_list<std::pair<double, const OdeState*>> terms) {
      for (std::size_t i = 0; i < n_; ++i) {
        Complex acc = y[i];
        for (auto& [w, k] : terms) acc += h * w * (*k)[i];
        tmp_[i] = acc;
      }
    };
    combo({{a21, &k1_}});
    eval(t + c2 * h, tmp_, k2_);
    combo({{a31, &k1_}, {a32, &k2_}});
    eval(t + c3 * h, tmp_, k3_);
    combo({{a41, &k1_}, {a42, &k2_}, {a43, &k3_}});
    eval(t + c4 * h, tmp_, k4_);
    combo({{a51, &k1_}, {a52, &k2_}, {a53, &k3_}, {a54, &k4_}});
    eval(t + c5 * h, tmp_, k5_);
    combo({{a61, &k1_}, {a62, &k2_}, {a63, &k3_}, {a64, &k4_}, {a65, &k5_}});
    eval(t + h, tmp_, k6_);
    for (std::size_t i = 0; i < n_; ++i) {
      ynew_[i] = y[i] + h * (a71 * k1_[i] + a73 * k3_[i] + a74 * k4_[i] + a75 * k5_[i] +
                             a76 * k6_[i]);
    }
    eval(t + h, ynew_, k7_);
    double sum = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      Complex err = h * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] + e6 * k6_[i] +
                         e7 * k7_[i]);
      double sk = p_.abs_tol + p_.rel_tol * std::max(std::abs(y[i]), std::abs(ynew_[i]));
      double r = std::abs(err) / sk;
      sum += r * r;
    }
    return std::sqrt(sum / static_cast<double>(n_));
  }

  void dense_coefficients(double h) {
    for (std::size_t i = 0; i < n_; ++i) {
      r5_[i] = h * (d1 * k1_[i] + d3 * k3_[i] + d4 * k4_[i] + d5 * k5_[i] + d6 * k6_[i] +
                    d7 * k7_[i]);
    }
  }

  OdeState interpolate(const OdeState& y, double h, double theta) const {
    OdeState out(n_);
    const double theta1 = 1.0 - theta;
    for (std::size_t i = 0; i < n_; ++i) {
      Complex ydiff = ynew_[i] - y[i];
      Complex bspl = h * k1_[i] - ydiff;
      Complex r4 = ydiff - h * k7_[i] - bspl;
      out[i] = y[i] + theta * (ydiff + theta1 * (bspl + theta * (r4 + theta1 * r5_[i])));
    }
    return out;
  }

 private:
  const OdeProblem& p_;
  std::size_t n_;
};

}  // namespace

SampledPath adaptive_ode(const OdeProblem& problem, const OdeOptions& options) {
  if (problem.t1 == problem.t0) throw DomainError("adaptive_ode requires t1 != t0");
  if (!(problem.rel_tol > 0.0) || !(problem.abs_tol > 0.0)) {
    throw DomainError("adaptive_ode tolerances must be positive");
  }
  if (problem.y0.empty()) throw DomainError("adaptive_ode needs a non-empty state");
  if (!all_finite(problem.y0)) throw DomainError("adaptive_ode initial state is not finite");
  const double dir = problem.t1 > problem.t0 ? 1.0 : -1.0;
  const auto& samples = options.sample_times;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double s = samples[i];
    if (dir * (s - problem.t0) < -1e-14 * std::max(1.0, std::abs(problem.t0)) ||
        dir * (s - problem.t1) > 1e-14 * std::max(1.0, std::abs(problem.t1))) {
      throw DomainError("sample time outside the integration interval");
    }
    if (i > 0 && dir * (s - samples[i - 1]) <= 0.0) {
      throw DomainError("sample times must be strictly monotone");
    }
  }

  Stepper st(problem);
  SampledPath path;
  OdeState y = problem.y0;
  double t = problem.t0;
  path.t_reached = t;
  st.eval(t, y, st.k1_);  // errors here propagate: the start point itself is invalid

  std::size_t next_sample = 0;
  const bool every_step = samples.empty();
  auto emit_until = [&](double t_old, double h, const OdeState& y_old, bool final_step) {
    while (next_sample < samples.size()) {
      double s = samples[next_sample];
      if (dir * (s - (t_old + h)) > 0.0 && !final_step) break;
      double theta = (s - t_old) / h;
      theta = std::clamp(theta, 0.0, 1.0);
      path.times.push_back(s);
      path.values.push_back(theta == 1.0 ? st.ynew_ : st.interpolate(y_old, h, theta));
      ++next_sample;
    }
  };

  if (every_step) {
    path.times.push_back(t);
    path.values.push_back(y);
  } else {
    while (next_sample < samples.size() && samples[next_sample] == problem.t0) {
      path.times.push_back(problem.t0);
      path.values.push_back(y);
      ++next_sample;
    }
  }

  const double span = std::abs(problem.t1 - problem.t0);
  double h;
  if (options.initial_step > 0.0) {
    h = options.initial_step;
  } else {
    double d0 = scaled_norm(y, y, problem.rel_tol, problem.abs_tol);
    double dd1 = scaled_norm(st.k1_, y, problem.rel_tol, problem.abs_tol);
    h = (d0 < 1e-5 || dd1 < 1e-5) ? 1e-6 : 0.01 * d0 / dd1;
    h = std::min(h, span);
    OdeState y1(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) y1[i] = y[i] + dir * h * st.k1_[i];
    try {
      OdeState f1(y.size());
      st.eval(t + dir * h, y1, f1);
      for (std::size_t i = 0; i < y.size(); ++i) f1[i] -= st.k1_[i];
      double dd2 = scaled_norm(f1, y, problem.rel_tol, problem.abs_tol) / h;
      double h1 = std::max(dd1, dd2) <= 1e-15 ? std::max(1e-6, h * 1e-3)
                                              : std::pow(0.01 / std::max(dd1, dd2), 0.2);
      h = std::min(100.0 * h, h1);
    } catch (const Error&) {
      h *= 0.01;
    }
  }
  const double max_step = options.max_step > 0.0 ? options.max_step : span;
  h = std::min(h, max_step);

  bool last_rejected = false;
  std::string last_failure;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  while (true) {
    if (path.accepted_steps + path.rejected_steps >= options.max_steps) {
      path.status = OdeStatus::StepLimit;
      path.diagnostic = "step limit reached at t = " + std::to_string(t);
      break;
    }
    double min_step = 16.0 * eps * std::max(1.0, std::abs(t));
    if (h < min_step) {
      path.status = OdeStatus::StepUnderflow;
      path.diagnostic = "step size underflow at t = " + std::to_string(t);
      if (!last_failure.empty()) path.diagnostic += " (" + last_failure + ")";
      break;
    }
    double remaining = std::abs(problem.t1 - t);
    bool final_step = false;
    if (h >= remaining * (1.0 - 1e-12)) {
      h = remaining;
      final_step = true;
    }
    double err;
    try {
      err = st.step(t, y, dir * h);
      if (!all_finite(st.ynew_)) throw SingularityError("non-finite state");
    } catch (const Error& e) {
      last_failure = e.what();
      ++path.rejected_steps;
      h *= 0.25;
      last_rejected = true;
      continue;
    }
    if (err <= 1.0) {
      ++path.accepted_steps;
      st.dense_coefficients(dir * h);
      double t_new = final_step ? problem.t1 : t + dir * h;
      if (every_step) {
        path.times.push_back(t_new);
        path.values.push_back(st.ynew_);
      } else {
        emit_until(t, dir * h, y, final_step);
      }
      y = st.ynew_;
      t = t_new;
      path.t_reached = t;
      st.k1_ = st.k7_;
      last_failure.clear();
      if (final_step) break;
      double fac = err == 0.0 ? 10.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 10.0);
      if (last_rejected) fac = std::min(fac, 1.0);
      h = std::min(h * fac, max_step);
      last_rejected = false;
    } else {
      ++path.rejected_steps;
      h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 1.0);
      last_rejected = true;
    }
  }
  return path;
}

}  // namespace bohmtraj
