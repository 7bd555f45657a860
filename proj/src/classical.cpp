#include "bohmtraj/classical.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "bohmtraj/error.hpp"

namespace bohmtraj {

namespace {

// Forward-mode dual number carrying d/d(x_r, x_i, p_r, p_i).
struct Dual {
  double v = 0.0;
  std::array<double, 4> d{};

  Dual() = default;
  Dual(double value) : v(value) {}  // NOLINT: constants promote implicitly
  static Dual variable(double value, int slot) {
    Dual x(value);
    x.d[slot] = 1.0;
    return x;
  }
};

Dual operator+(Dual a, const Dual& b) {
  a.v += b.v;
  for (int i = 0; i < 4; ++i) a.d[i] += b.d[i];
  return a;
}
Dual operator-(Dual a, const Dual& b) {
  a.v -= b.v;
  for (int i = 0; i < 4; ++i) a.d[i] -= b.d[i];
  return a;
}
Dual operator*(const Dual& a, const Dual& b) {
  Dual r(a.v * b.v);
  for (int i = 0; i < 4; ++i) r.d[i] = a.d[i] * b.v + a.v * b.d[i];
  return r;
}
Dual operator/(const Dual& a, const Dual& b) {
  Dual r(a.v / b.v);
  for (int i = 0; i < 4; ++i) r.d[i] = (a.d[i] * b.v - a.v * b.d[i]) / (b.v * b.v);
  return r;
}
Dual chain(const Dual& a, double value, double slope) {
  Dual r(value);
  for (int i = 0; i < 4; ++i) r.d[i] = slope * a.d[i];
  return r;
}
Dual cos(const Dual& a) { return chain(a, std::cos(a.v), -std::sin(a.v)); }
Dual sin(const Dual& a) { return chain(a, std::sin(a.v), std::cos(a.v)); }
Dual cosh(const Dual& a) { return chain(a, std::cosh(a.v), std::sinh(a.v)); }
Dual sinh(const Dual& a) { return chain(a, std::sinh(a.v), std::cosh(a.v)); }

using std::cos, std::sin, std::cosh, std::sinh;

double value_of(double x) { return x; }
double value_of(const Dual& x) { return x.v; }

template <class T>
std::array<T, 2> ho_split(const HoModel& m, const T& xr, const T& xi, const T& pr, const T& pi) {
  const double k = m.mass * m.omega * m.omega;
  T hr = (pr * pr - pi * pi) / (2.0 * m.mass) + 0.5 * k * (xr * xr - xi * xi) +
         0.5 * m.hbar * m.omega;
  T hi = pr * pi / m.mass + k * xr * xi;
  return {hr, hi};
}

template <class T>
std::array<T, 2> pt_split(const PtModel& m, const T& xr, const T& xi, const T& pr, const T& pi) {
  const double v0 = m.v0();
  const double l2 = m.lambda * m.lambda - m.lambda;
  const double k2 = m.kappa * m.kappa - m.kappa;
  const T c = cos(xr / m.a), s = sin(xr / m.a);
  const T ch = cosh(xi / m.a), sh = sinh(xi / m.a);
  const T plus = ch + c;
  const T minus = c - ch;
  if (std::abs(value_of(plus)) < 1e-14 || std::abs(value_of(minus)) < 1e-14) {
    throw SingularityError("Poschl-Teller Hamiltonian evaluated at a pole");
  }
  T hr = (pr * pr - pi * pi) / (2.0 * m.mass) +
         v0 * (l2 * (ch * c + 1.0) / (plus * plus) - k2 * (ch * c - 1.0) / (minus * minus)) -
         0.5 * v0 * (m.lambda + m.kappa) * (m.lambda + m.kappa);
  T hi = pi * pr / m.mass + v0 * (l2 * sh * s / (plus * plus) - k2 * sh * s / (minus * minus));
  return {hr, hi};
}

template <class T>
std::array<T, 2> split(const Model& model, const T& xr, const T& xi, const T& pr, const T& pi) {
  if (const auto* ho = std::get_if<HoModel>(&model)) return ho_split(*ho, xr, xi, pr, pi);
  return pt_split(std::get<PtModel>(model), xr, xi, pr, pi);
}

void require_nonzero(Complex d, const char* what) {
  if (std::abs(d) < 1e-14) throw SingularityError(std::string("closed form singular: ") + what);
}

// Continuity tracker for multivalued closed forms.
Complex nearest(const std::vector<Complex>& candidates, Complex previous) {
  Complex best = candidates.front();
  for (Complex c : candidates) {
    if (std::abs(c - previous) < std::abs(best - previous)) best = c;
  }
  return best;
}

FixedPointClass classify(double j11, double j12, double j21, double j22) {
  const double tr = j11 + j22;
  const double det = j11 * j22 - j12 * j21;
  const double scale = std::max({std::abs(j11), std::abs(j12), std::abs(j21), std::abs(j22), 1e-300});
  if (det < -1e-10 * scale * scale) return FixedPointClass::Saddle;
  if (std::abs(tr) <= 1e-8 * scale) return FixedPointClass::Centre;
  if (tr * tr - 4.0 * det >= 0.0) return FixedPointClass::Node;
  return FixedPointClass::Focus;
}

}  // namespace

FieldSample gaussian_fields(const HoModel& m, double centre, Complex z, double t, FieldVariant variant) {
  const double w = m.omega;
  const double c = std::cos(w * t), s = std::sin(w * t);
  if (variant == FieldVariant::Real) {
    if (z.imag() != 0.0) throw DomainError("real Gaussian fields need a real position");
    const double x = z.real();
    const double d = x - centre * c;
    return {Complex(-centre * w * s), Complex(0.5 * m.hbar * w - 0.5 * m.mass * w * w * d * d)};
  }
  const Complex v(-w * (z.imag() + centre * s), w * (z.real() - centre * c));
  return {v, Complex(0.5 * m.hbar * w)};
}

Complex ho_flow_analytic(const HoModel& m, PhasePoint start, double t) {
  const double c = std::cos(m.omega * t), s = std::sin(m.omega * t);
  return start.x * c + start.p / (m.mass * m.omega) * s;
}

Complex gaussian_complex_traj(const HoModel& m, double centre, double c1, double c2, double t) {
  const double c = std::cos(m.omega * t), s = std::sin(m.omega * t);
  return {(0.5 * centre + c1) * c - c2 * s, c2 * c + (c1 - 0.5 * centre) * s};
}

PhasePoint init_momentum(Complex z0, double x_max, const HoModel& m) {
  const double mw = m.mass * m.omega;
  return {z0, Complex(-mw * z0.imag(), mw * (z0.real() - x_max))};
}

double conjecture_ho_potential(const HoModel& m, double x_max, double x, double t) {
  const double d = x - x_max * std::cos(m.omega * t);
  return 0.5 * m.hbar * m.omega - 0.5 * m.mass * m.omega * m.omega * d * d;
}

ConjecturePoint conjecture_ho(const HoModel& m, const ConjectureParams& p, double t) {
  const double x = p.x_max * (std::cos(m.omega * t) - 1.0) + p.x0;
  return {x, conjecture_ho_potential(m, p.x_max, x, t)};
}

namespace {
void check_pt_params(const PtModel& m, const ConjectureParams& p) {
  if (!(p.x0 > 0 && p.x0 < m.width() && p.x_max > 0 && p.x_max < m.width())) {
    throw DomainError("conjecture endpoints must lie strictly inside (0, a pi)");
  }
  if (!(p.period > 0)) throw DomainError("conjecture period must be positive");
}
}  // namespace

double conjecture_pt(const PtModel& m, const ConjectureParams& p, double t) {
  check_pt_params(m, p);
  const double plus = std::cos(p.x0 / m.a) + std::cos(p.x_max / m.a);
  const double minus = std::cos(p.x0 / m.a) - std::cos(p.x_max / m.a);
  const double arg = 0.5 * plus + 0.5 * minus * std::cos(2.0 * kPi * t / p.period);
  return m.a * std::acos(std::clamp(arg, -1.0, 1.0));
}

double conjecture_pt_potential(const PtModel& m, const ConjectureParams& p, double x) {
  check_pt_params(m, p);
  const double u = x / (2.0 * m.a);
  const double c = std::cos(u), s = std::sin(u);
  if (std::abs(c) < 1e-14 || std::abs(s) < 1e-14) throw SingularityError("effective potential pole");
  const double c0 = std::cos(p.x0 / (2 * m.a)), s0 = std::sin(p.x0 / (2 * m.a));
  const double cm = std::cos(p.x_max / (2 * m.a)), sm = std::sin(p.x_max / (2 * m.a));
  const double pref = 2.0 * m.mass * m.a * m.a * kPi * kPi / (p.period * p.period);
  return pref * (c0 * c0 * cm * cm / (c * c) + s0 * s0 * sm * sm / (s * s));
}

double pt_classical(const PtModel& m, double E, double t) {
  require_finite(E, "energy");
  if (!(E > 0.0)) throw DomainError("classical PT energy must be positive");
  const double v0 = m.v0();
  const double alpha = m.lambda * (m.lambda - 1.0) * v0 / E;
  const double beta = m.kappa * (m.kappa - 1.0) * v0 / E;
  const double gamma = alpha * alpha / 4 + beta * beta / 4 - alpha * beta / 2 - alpha - beta + 1;
  if (gamma < 0.0) throw DomainError("energy below the bottom of the Poschl-Teller well");
  const double arg = 0.5 * (alpha - beta) + std::sqrt(gamma) * std::cos(std::sqrt(2.0 * E / m.mass) * t / m.a);
  if (std::abs(arg) > 1.0 + 1e-12) throw DomainError("energy outside the range of the closed form");
  return m.a * std::acos(std::clamp(arg, -1.0, 1.0));
}

double pt_classical_period(const PtModel& m, double E) {
  if (!(E > 0.0)) throw DomainError("classical PT energy must be positive");
  return 2.0 * kPi * m.a / std::sqrt(2.0 * E / m.mass);
}

Complex energy(const Model& model, PhasePoint point, bool include_zero_point) {
  require_finite(point.x, "position");
  require_finite(point.p, "momentum");
  Complex h = point.p * point.p / (2.0 * mass(model)) + potential(model, point.x);
  if (const auto* ho = std::get_if<HoModel>(&model); ho && include_zero_point) {
    h += 0.5 * ho->hbar * ho->omega;
  }
  return h;
}

SplitEnergy split_energy(const Model& model, PhasePoint point) {
  auto [hr, hi] = split<double>(model, point.x.real(), point.x.imag(), point.p.real(), point.p.imag());
  return {hr, hi};
}

Trajectory complex_hamilton_flow(const Model& model, PhasePoint start, const TrajectoryOptions& opt,
                                 FlowForm form) {
  validate(model);
  energy(model, start);  // rejects a start on a pole
  if (opt.samples < 2) throw DomainError("trajectory needs at least two samples");
  const double m = mass(model);
  OdeProblem problem;
  problem.y0 = {start.x, start.p};
  problem.t0 = opt.t0;
  problem.t1 = opt.t1;
  problem.rel_tol = opt.rel_tol;
  problem.abs_tol = opt.abs_tol;
  if (form == FlowForm::Holomorphic) {
    problem.rhs = [model, m](double, std::span<const Complex> y, std::span<Complex> dy) {
      dy[0] = y[1] / m;
      dy[1] = -potential_derivative(model, y[0]);
    };
  } else {
    problem.rhs = [model](double, std::span<const Complex> y, std::span<Complex> dy) {
      const Dual xr = Dual::variable(y[0].real(), 0), xi = Dual::variable(y[0].imag(), 1);
      const Dual pr = Dual::variable(y[1].real(), 2), pi = Dual::variable(y[1].imag(), 3);
      auto [hr, hi] = split<Dual>(model, xr, xi, pr, pi);
      // slots: 0 x_r, 1 x_i, 2 p_r, 3 p_i
      const double dxr = 0.5 * (hr.d[2] + hi.d[3]);
      const double dxi = 0.5 * (hi.d[2] - hr.d[3]);
      const double dpr = -0.5 * (hr.d[0] + hi.d[1]);
      const double dpi = 0.5 * (hr.d[1] - hi.d[0]);
      dy[0] = Complex(dxr, dxi);
      dy[1] = Complex(dpr, dpi);
    };
  }
  OdeOptions o;
  o.sample_times = linspace(opt.t0, opt.t1, static_cast<std::size_t>(opt.samples));
  o.max_step = opt.max_step;
  const SampledPath path = adaptive_ode(problem, o);
  Trajectory out;
  out.times = path.times;
  for (const auto& y : path.values) {
    out.x.push_back(y[0]);
    out.p.push_back(y[1]);
  }
  out.status = path.status;
  out.diagnostic = path.diagnostic;
  out.metadata.model = model_name(model);
  out.metadata.sampler = "classical";
  out.metadata.variant = form == FlowForm::Holomorphic ? "classical" : "classical-split";
  out.metadata.rel_tol = opt.rel_tol;
  out.metadata.abs_tol = opt.abs_tol;
  out.metadata.x0 = start.x;
  out.metadata.p0 = start.p;
  return out;
}

StationaryOracle stationary_oracles(const Model& model, int n, Complex z, double t) {
  require_finite(z, "position");
  StationaryOracle out;
  const Complex I(0.0, 1.0);
  if (const auto* ho = std::get_if<HoModel>(&model)) {
    const double m = ho->mass, w = ho->omega, h = ho->hbar;
    switch (n) {
      case 0:
        out.v = I * w * z;
        out.Q = 0.5 * h * w;
        break;
      case 1:
        require_nonzero(z, "z = 0");
        out.v = I * w * z - I * h / (m * z);
        out.Q = 0.5 * h * w + h * h / (2.0 * m * z * z);
        break;
      case 5: {
        const Complex z2 = z * z;
        const Complex den_v = 15.0 * h * h * m * z - 20.0 * h * m * m * z * z2 * w +
                              4.0 * m * m * m * z2 * z2 * z * w * w;
        require_nonzero(z, "z = 0");
        require_nonzero(den_v, "velocity denominator");
        out.v = I * z * w - 5.0 * I * h / (m * z) +
                (60.0 * I * h * h * h - 40.0 * I * h * h * m * z2 * w) / den_v;
        const Complex den_q = 15.0 * h * h * z - 20.0 * h * m * z * z2 * w + 4.0 * m * m * z2 * z2 * z * w * w;
        const Complex z4 = z2 * z2, z6 = z4 * z2, z8 = z4 * z4, z10 = z8 * z2;
        const Complex num = 225.0 * std::pow(h, 5) + 225.0 * std::pow(h, 4) * m * z2 * w +
                            200.0 * h * h * std::pow(m, 3) * z6 * std::pow(w, 3) -
                            80.0 * h * std::pow(m, 4) * z8 * std::pow(w, 4) +
                            16.0 * std::pow(m, 5) * z10 * std::pow(w, 5);
        out.Q = h * num / (2.0 * m * den_q * den_q);
        break;
      }
      default:
        throw DomainError("no closed form for HO level " + std::to_string(n));
    }
    if (n <= 1) out.x_t = closed_form_path(model, n, z, {0.0, t}).back();
    return out;
  }
  const auto& pt = std::get<PtModel>(model);
  const double a = pt.a, m = pt.mass, h = pt.hbar, k = pt.kappa, l = pt.lambda, s = k + l;
  const Complex c1 = std::cos(z / a), s1 = std::sin(z / a);
  const Complex ch = std::cos(z / (2.0 * a)), sh = std::sin(z / (2.0 * a));
  require_nonzero(s1, "sin(z/a) = 0");
  switch (n) {
    case 0:
      out.v = h * (s * c1 + k - l) / (I * 2.0 * a * m * s1);
      out.Q = pt.v0() * ((k - l) * c1 + s) / (s1 * s1);
      out.x_t = closed_form_path(model, 0, z, {0.0, t}).back();
      break;
    case 1: {
      const Complex den = (s + 1.0) * c1 + k - l;
      require_nonzero(den, "excited-state denominator");
      out.v = h * ((2 * k * k + k) * ch / sh + (2 * l * l + l) * sh / ch - (s + 1) * (s + 2) * s1) /
              (I * 2.0 * a * m * den);
      out.Q = 0.5 * pt.v0() *
              (4.0 * (s + 1) * ((k - l) * c1 + (s + 1)) / (den * den) + k / (sh * sh) + l / (ch * ch));
      break;
    }
    default:
      throw DomainError("no closed form for Poschl-Teller level " + std::to_string(n));
  }
  return out;
}

std::vector<Complex> closed_form_path(const Model& model, int n, Complex z0,
                                      const std::vector<double>& times) {
  require_finite(z0, "z0");
  std::vector<Complex> out;
  out.reserve(times.size());
  const Complex I(0.0, 1.0);
  if (const auto* ho = std::get_if<HoModel>(&model)) {
    const double w = ho->omega;
    const double ell2 = ho->hbar / (ho->mass * w);
    if (n == 0) {
      for (double t : times) out.push_back(z0 * std::exp(I * w * t));
      return out;
    }
    if (n != 1) throw DomainError("no closed-form HO path for level " + std::to_string(n));
    // Fine internal stepping keeps the sign choice continuous between samples.
    Complex prev = z0;
    double t_prev = 0.0;
    for (double t : times) {
      const int sub = std::max(1, static_cast<int>(std::ceil(std::abs(t - t_prev) * w * 200.0)));
      for (int j = 1; j <= sub; ++j) {
        const double tj = t_prev + (t - t_prev) * j / sub;
        const Complex root = std::sqrt(ell2 + std::exp(2.0 * I * w * tj) * (z0 * z0 - ell2));
        prev = nearest({root, -root}, prev);
      }
      t_prev = t;
      out.push_back(prev);
    }
    return out;
  }
  if (n != 0) throw DomainError("no closed-form Poschl-Teller path for level " + std::to_string(n));
  const auto& pt = std::get<PtModel>(model);
  const double a = pt.a, k = pt.kappa, l = pt.lambda, s = k + l;
  const double rate = pt.hbar * s / (2.0 * a * a * pt.mass);
  const Complex lead = s * std::cos(z0 / a) + k - l;
  Complex prev = z0 / a;
  double t_prev = 0.0;
  for (double t : times) {
    const int sub = std::max(1, static_cast<int>(std::ceil(std::abs(t - t_prev) * rate * 200.0)));
    for (int j = 1; j <= sub; ++j) {
      const double tj = t_prev + (t - t_prev) * j / sub;
      const Complex w = std::acos((lead * std::exp(I * rate * tj) + l - k) / s);
      std::vector<Complex> candidates;
      for (Complex base : {w, -w}) {
        const double turns = std::round((prev - base).real() / (2.0 * kPi));
        candidates.push_back(base + 2.0 * kPi * turns);
      }
      prev = nearest(candidates, prev);
    }
    t_prev = t;
    out.push_back(a * prev);
  }
  return out;
}

Region default_region(const Model& model) {
  if (const auto* pt = std::get_if<PtModel>(&model)) {
    return {0.05, pt->width() - 0.05, -3.0, 3.0, 64};
  }
  return {-4.0, 4.0, -4.0, 4.0, 64};
}

const char* to_string(FixedPointClass c) {
  switch (c) {
    case FixedPointClass::Centre:
      return "centre";
    case FixedPointClass::Saddle:
      return "saddle";
    case FixedPointClass::Node:
      return "node";
    case FixedPointClass::Focus:
      return "focus";
  }
  return "unknown";
}

std::vector<FixedPoint> fixed_points(const Model& model, int n, const Region& region) {
  validate(model);
  if (!(region.re_lo < region.re_hi && region.im_lo < region.im_hi) || region.cells < 1) {
    throw DomainError("invalid fixed-point search region");
  }
  const double h = hbar(model), m = mass(model);
  const double ell = length_scale(model);
  std::vector<FixedPoint> found;
  const double dre = (region.re_hi - region.re_lo) / region.cells;
  const double dim = (region.im_hi - region.im_lo) / region.cells;
  auto inside = [&](Complex z) {
    return z.real() >= region.re_lo && z.real() <= region.re_hi && z.imag() >= region.im_lo &&
           z.imag() <= region.im_hi;
  };
  for (int i = 0; i < region.cells; ++i) {
    for (int j = 0; j < region.cells; ++j) {
      Complex z(region.re_lo + (i + 0.5) * dre, region.im_lo + (j + 0.5) * dim);
      bool converged = false;
      try {
        // Newton on phi' (zeros of v~ = (hbar/im) phi'/phi away from nodes).
        for (int it = 0; it < 60; ++it) {
          const EigenData e = eigen(model, n, z);
          if (e.ddphi == Complex{}) break;
          const Complex step = e.dphi / e.ddphi;
          z -= step;
          if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) ||
              std::abs(z - Complex(0.5 * (region.re_lo + region.re_hi), 0.5 * (region.im_lo + region.im_hi))) >
                  10.0 * (region.re_hi - region.re_lo + region.im_hi - region.im_lo)) {
            break;
          }
          if (std::abs(step) < 1e-13 * std::max(1.0, std::abs(z))) {
            converged = true;
            break;
          }
        }
      } catch (const Error&) {
        converged = false;
      }
      if (!converged || !inside(z)) continue;
      const bool duplicate = std::any_of(found.begin(), found.end(), [&](const FixedPoint& f) {
        return std::abs(f.z - z) < 1e-7 * std::max(1.0, std::abs(z));
      });
      if (duplicate) continue;
      try {
        const EigenData e = eigen(model, n, z);
        if (std::abs(e.phi) < 1e-12 * std::abs(e.ddphi) * ell * ell) continue;  // node, not a zero of v~
        // dv~/dz at a zero of phi' reduces to (hbar / i m) phi''/phi.
        const Complex slope = Complex(0.0, -h / m) * e.ddphi / e.phi;
        // Real Jacobian of (Re v~, Im v~) over (x_r, x_i).
        const FixedPointClass kind = classify(slope.real(), -slope.imag(), slope.imag(), slope.real());
        found.push_back({z, kind, slope});
      } catch (const Error&) {
      }
    }
  }
  std::sort(found.begin(), found.end(), [](const FixedPoint& a, const FixedPoint& b) {
    if (std::abs(a.z.real() - b.z.real()) > 1e-9) return a.z.real() < b.z.real();
    return a.z.imag() < b.z.imag();
  });
  return found;
}

std::vector<FixedPoint> fixed_points(const Model& model, int n) {
  return fixed_points(model, n, default_region(model));
}

}  // namespace bohmtraj
