#include "bohmtraj/coherent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bohmtraj/error.hpp"
#include "bohmtraj/quadrature.hpp"

namespace bohmtraj {

namespace {

double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

double coupling_sum(const PtModel& m) { return m.kappa + m.lambda; }

/// Real-axis points spread over the region the state occupies.
std::vector<Complex> probe_points(const Model& model, double J) {
  double lo, hi;
  if (const auto* pt = std::get_if<PtModel>(&model)) {
    lo = 0.05 * pt->width();
    hi = 0.95 * pt->width();
  } else {
    hi = (std::sqrt(2.0 * J) + 2.0) * length_scale(model);
    lo = -hi;
  }
  std::vector<Complex> out;
  for (int k = 0; k < 9; ++k) out.emplace_back(lo + (hi - lo) * k / 8.0, 0.0);
  return out;
}

}  // namespace

KlauderState KlauderState::build(const Model& model, double J, KlauderOptions options) {
  validate(model);
  require_finite(J, "J");
  if (J < 0.0) throw DomainError("Klauder parameter J must be non-negative");
  if (options.cap < 1) throw DomainError("truncation cap must be positive");
  if (!(options.tail_eps > 0.0)) throw DomainError("tail_eps must be positive");

  KlauderState s;
  s.model_ = model;
  s.J_ = J;
  s.omega_ = model_omega(model);
  const bool is_pt = std::holds_alternative<PtModel>(model);
  s.norm_ = is_pt ? std::sqrt(hyp0f1(1.0 + coupling_sum(std::get<PtModel>(model)), J))
                  : std::exp(0.5 * J);

  if (J == 0.0) {
    s.coeffs_ = {1.0};
    s.e_n_ = {spectral_value(model, 0)};
    return s;
  }

  const int cap = is_pt ? std::min(options.cap, kPtOrderCap) : std::min(options.cap, kHermiteCap);
  const double log_j = std::log(J);
  std::vector<double> log_w{0.0};  // log J^n / rho_n
  double log_sum = 0.0;
  bool reached = false;
  for (int n = 1; n <= cap; ++n) {
    log_w.push_back(log_w.back() + log_j - std::log(spectral_value(model, n)));
    log_sum = log_add(log_sum, log_w.back());
    const double ratio = J / spectral_value(model, n + 1);  // decreasing in n
    if (ratio < 1.0) {
      const double log_tail = log_w.back() + std::log(ratio) - std::log1p(-ratio) - log_sum;
      s.tail_bound_ = std::exp(log_tail);
      if (s.tail_bound_ < options.tail_eps) {
        reached = true;
        break;
      }
    } else {
      s.tail_bound_ = std::numeric_limits<double>::infinity();
    }
  }
  if (!reached) {
    s.warning_ = "truncation cap " + std::to_string(cap) +
                 " reached before the tail bound fell below tail_eps (bound " +
                 std::to_string(s.tail_bound_) + ")";
  }
  s.coeffs_.resize(log_w.size());
  s.e_n_.resize(log_w.size());
  for (std::size_t n = 0; n < log_w.size(); ++n) {
    s.coeffs_[n] = std::exp(0.5 * (log_w[n] - log_sum));
    s.e_n_[n] = spectral_value(model, static_cast<int>(n));
  }

  // Six-digit stability: the retained sum against one with ten more orders
  // (or ten fewer when the cap leaves no room).
  const int n_trunc = s.truncation();
  KlauderState other = s;
  int compare_orders = n_trunc;
  if (n_trunc + 10 <= cap) {
    double lw = log_w.back();
    for (int n = n_trunc + 1; n <= n_trunc + 10; ++n) {
      lw += log_j - std::log(spectral_value(model, n));
      other.coeffs_.push_back(std::exp(0.5 * (lw - log_sum)));
      other.e_n_.push_back(spectral_value(model, n));
    }
  } else {
    compare_orders = n_trunc - 10;
  }
  try {
    const int orders = compare_orders == n_trunc ? other.truncation() : compare_orders;
    double diff = 0.0, scale = 0.0;
    for (Complex z : probe_points(model, J)) {
      const Complex a = s.evaluate(z, 0.0).psi;
      diff = std::max(diff, std::abs(a - other.evaluate_truncated(z, 0.0, orders).psi));
      scale = std::max(scale, std::abs(a));
    }
    if (diff > 1e-6 * scale) {
      if (!s.warning_.empty()) s.warning_ += "; ";
      s.warning_ += "truncation not stable to six digits";
    }
  } catch (const Error&) {
    // representative point unusable; the tail bound already governs
  }
  return s;
}

WaveSample KlauderState::evaluate(Complex z, double t) const {
  return evaluate_truncated(z, t, truncation());
}

WaveSample KlauderState::evaluate_truncated(Complex z, double t, int n_max) const {
  require_finite(t, "time");
  n_max = std::clamp(n_max, 0, truncation());
  thread_local std::vector<EigenData> ladder;
  ladder.resize(n_max + 1);
  eigen_ladder(model_, z, ladder);
  WaveSample out{};
  for (int n = 0; n <= n_max; ++n) {
    const Complex w = coeffs_[n] * std::polar(1.0, -omega_ * t * e_n_[n]);
    out.psi += w * ladder[n].phi;
    out.dpsi += w * ladder[n].dphi;
    out.ddpsi += w * ladder[n].ddphi;
  }
  return out;
}

double mandel_q(const Model& model, double J) {
  require_finite(J, "J");
  if (J < 0.0) throw DomainError("Klauder parameter J must be non-negative");
  const auto* pt = std::get_if<PtModel>(&model);
  if (pt == nullptr || J == 0.0) return 0.0;
  const double s = coupling_sum(*pt);
  const double f1 = hyp0f1(1.0 + s, J);
  const double f2 = hyp0f1(2.0 + s, J);
  const double f3 = hyp0f1(3.0 + s, J);
  return J / (2.0 + s) * f3 / f2 - J / (1.0 + s) * f2 / f1;
}

double mean_occupation(const KlauderState& state) {
  double sum = 0.0;
  const auto& c = state.coeffs();
  for (std::size_t n = 0; n < c.size(); ++n) sum += static_cast<double>(n) * c[n] * c[n];
  return sum;
}

double mean_occupation_formula(const Model& model, double J) {
  require_finite(J, "J");
  const auto* pt = std::get_if<PtModel>(&model);
  if (pt == nullptr) return J;
  const double s = coupling_sum(*pt);
  return J / (1.0 + s) * hyp0f1(2.0 + s, J) / hyp0f1(1.0 + s, J);
}

double occupation_variance(const KlauderState& state) {
  double m1 = 0.0, m2 = 0.0;
  const auto& c = state.coeffs();
  for (std::size_t n = 0; n < c.size(); ++n) {
    const double w = c[n] * c[n];
    m1 += static_cast<double>(n) * w;
    m2 += static_cast<double>(n * n) * w;
  }
  return m2 - m1 * m1;
}

std::pair<double, double> support(const KlauderState& state) {
  if (const auto* pt = std::get_if<PtModel>(&state.model())) return {0.0, pt->width()};
  const double half = (std::sqrt(2.0 * state.J()) + 8.0) * length_scale(state.model());
  return {-half, half};
}

PeakResult peak_position(const KlauderState& state) {
  auto [lo, hi] = support(state);
  if (const auto* pt = std::get_if<PtModel>(&state.model())) {
    lo += 1e-8 * pt->a;
    hi -= 1e-8 * pt->a;
  }
  ExtremumResult r = extremum_1d(
      [&](double x) { return std::abs(state.evaluate(x, 0.0).psi); }, lo, hi);
  return {r.argmax, r.value, r.multimodal};
}

MomentReport moments(const KlauderState& state, double t, double tol) {
  auto [lo, hi] = support(state);
  QuadratureOptions opt;
  opt.abs_tol = tol;
  opt.rel_tol = tol;
  opt.initial_segments = 32;
  auto first = integrate(
      [&](double x) {
        const WaveSample w = state.evaluate(x, t);
        const double rho = std::norm(w.psi);
        Bundle<5> b;
        b[0] = rho;
        b[1] = x * rho;
        b[2] = std::imag(std::conj(w.psi) * w.dpsi);
        b[3] = std::real(std::conj(w.psi) * w.ddpsi);
        b[4] = std::norm(w.dpsi);
        return b;
      },
      lo, hi, opt);
  MomentReport r;
  const double hb = hbar(state.model());
  r.norm = first.value[0];
  r.mean_x = first.value[1] / r.norm;
  r.mean_p = hb * first.value[2] / r.norm;
  r.mean_p2 = -hb * hb * first.value[3] / r.norm;
  r.mean_p2_gradient = hb * hb * first.value[4] / r.norm;
  const double mx = r.mean_x;
  opt.abs_tol = tol * std::max(1.0, mx * mx);
  const double centred = integrate(
                             [&](double x) {
                               const double d = x - mx;
                               return d * d * std::norm(state.evaluate(x, t).psi);
                             },
                             lo, hi, opt)
                             .value;
  r.var_x = centred / r.norm;
  r.var_p = std::max(0.0, r.mean_p2 - r.mean_p * r.mean_p);
  r.uncertainty_product = std::sqrt(r.var_x * r.var_p) / hb;
  double mean_h = 0.0;
  const auto& c = state.coeffs();
  for (std::size_t n = 0; n < c.size(); ++n) mean_h += state.spectral()[n] * c[n] * c[n];
  r.mean_H = hb * state.omega() * mean_h;
  return r;
}

std::vector<DensityPoint> density_snapshot(const KlauderState& state,
                                           const std::vector<double>& grid, double t) {
  std::vector<DensityPoint> out;
  out.reserve(grid.size());
  for (double x : grid) out.push_back({x, std::norm(state.evaluate(x, t).psi)});
  return out;
}

}  // namespace bohmtraj
