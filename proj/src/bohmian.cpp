#include "bohmtraj/bohmian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bohmtraj/error.hpp"

namespace bohmtraj {

namespace {

std::string format_number(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

void check_node(const WaveSampler& s, const WaveSample& w) {
  const double l = s.length_scale;
  const double scale = std::abs(w.dpsi) * l + std::abs(w.ddpsi) * l * l;
  if (w.psi == Complex{} || std::abs(w.psi) < 1e-14 * scale) {
    throw NodeError("wavefunction vanishes (|psi| = " + format_number(std::abs(w.psi)) + ")");
  }
}

std::optional<std::pair<double, double>> real_domain(const WaveSampler& s) {
  if (s.model) {
    if (const auto* pt = std::get_if<PtModel>(&*s.model)) {
      const double delta = 1e-8 * pt->a;
      return std::pair{delta, pt->width() - delta};
    }
  }
  return std::nullopt;
}

Trajectory from_path(const SampledPath& path, bool with_momentum, double mass) {
  Trajectory out;
  out.times = path.times;
  out.x.reserve(path.values.size());
  for (const auto& y : path.values) {
    out.x.push_back(y[0]);
    if (with_momentum) out.p.push_back(mass * y[1]);
  }
  out.status = path.status;
  out.diagnostic = path.diagnostic;
  return out;
}

OdeOptions ode_options(const TrajectoryOptions& opt) {
  if (opt.samples < 2) throw DomainError("trajectory needs at least two samples");
  OdeOptions o;
  o.sample_times = linspace(opt.t0, opt.t1, static_cast<std::size_t>(opt.samples));
  o.max_step = opt.max_step;
  return o;
}

TrajectoryMetadata metadata(const WaveSampler& s, const TrajectoryOptions& opt,
                            const char* variant, Complex x0) {
  TrajectoryMetadata m;
  m.model = s.model ? model_name(*s.model) : "";
  m.sampler = s.tag;
  m.variant = variant;
  m.rel_tol = opt.rel_tol;
  m.abs_tol = opt.abs_tol;
  m.x0 = x0;
  return m;
}

}  // namespace

WaveSampler stationary_sampler(const Model& model, int n) {
  validate(model);
  eigen(model, n, std::holds_alternative<PtModel>(model) ? Complex{1.0} : Complex{0.0});
  WaveSampler s;
  const double energy = energy_level(model, n);
  const double hb = hbar(model);
  s.eval = [model, n, energy, hb](Complex z, double t) {
    const EigenData e = eigen(model, n, z);
    const Complex phase = std::polar(1.0, -energy * t / hb);
    return WaveSample{phase * e.phi, phase * e.dphi, phase * e.ddphi};
  };
  s.tag = "stationary n=" + std::to_string(n);
  s.mass = mass(model);
  s.hbar = hb;
  s.length_scale = length_scale(model);
  s.model = model;
  return s;
}

WaveSampler klauder_sampler(std::shared_ptr<const KlauderState> state) {
  if (!state) throw DomainError("klauder_sampler needs a state");
  WaveSampler s;
  s.eval = [state](Complex z, double t) { return state->evaluate(z, t); };
  s.tag = "klauder J=" + format_number(state->J());
  s.mass = mass(state->model());
  s.hbar = hbar(state->model());
  s.length_scale = length_scale(state->model());
  s.model = state->model();
  return s;
}

WaveSampler klauder_sampler(const KlauderState& state) {
  return klauder_sampler(std::make_shared<const KlauderState>(state));
}

WaveSampler gaussian_sampler(const HoModel& model, double centre) {
  validate(model);
  require_finite(centre, "packet centre");
  const double m = model.mass, w = model.omega, hb = model.hbar;
  const double k = m * w / hb;
  const double log_norm = 0.25 * std::log(k / kPi);
  WaveSampler s;
  s.eval = [=](Complex z, double t) {
    const double c = std::cos(w * t), sn = std::sin(w * t);
    const Complex d = z - centre * c;
    const Complex exponent =
        -0.5 * k * d * d -
        Complex(0, 0.5) * (w * t + k * (2.0 * z * centre * sn - 0.5 * centre * centre * std::sin(2.0 * w * t)));
    const Complex psi = std::exp(log_norm + exponent);
    const Complex slope = -k * d - Complex(0, k * centre * sn);
    return WaveSample{psi, slope * psi, (slope * slope - k) * psi};
  };
  s.tag = "gaussian a=" + format_number(centre);
  s.mass = m;
  s.hbar = hb;
  s.length_scale = std::sqrt(hb / (m * w));
  s.model = Model{model};
  return s;
}

RealFields fields_real(const WaveSampler& sampler, double x, double t) {
  require_finite(x, "position");
  require_finite(t, "time");
  const WaveSample w = sampler.eval(x, t);
  check_node(sampler, w);
  const double rho = std::norm(w.psi);
  const double rho_x = 2.0 * std::real(std::conj(w.psi) * w.dpsi);
  const double rho_xx = 2.0 * std::real(std::conj(w.psi) * w.ddpsi) + 2.0 * std::norm(w.dpsi);
  const double hb = sampler.hbar, m = sampler.mass;
  RealFields f;
  f.v = hb / m * std::imag(std::conj(w.psi) * w.dpsi) / rho;
  f.Q = hb * hb / (4.0 * m) * (rho_x * rho_x / (2.0 * rho * rho) - rho_xx / rho);
  return f;
}

ComplexFields fields_complex(const WaveSampler& sampler, Complex z, double t) {
  require_finite(z, "position");
  require_finite(t, "time");
  const WaveSample w = sampler.eval(z, t);
  check_node(sampler, w);
  const Complex ratio = w.dpsi / w.psi;
  const double hb = sampler.hbar, m = sampler.mass;
  ComplexFields f;
  f.v = Complex(0, -hb / m) * ratio;
  f.Q = -hb * hb / (2.0 * m) * (w.ddpsi / w.psi - ratio * ratio);
  return f;
}

Trajectory trajectory_real(const WaveSampler& sampler, double x0, const TrajectoryOptions& opt) {
  require_finite(x0, "x0");
  const auto domain = real_domain(sampler);
  if (domain && (x0 < domain->first || x0 > domain->second)) {
    throw DomainError("x0 outside the Poschl-Teller well");
  }
  OdeProblem problem;
  problem.y0 = {Complex(x0, 0.0)};
  problem.t0 = opt.t0;
  problem.t1 = opt.t1;
  problem.rel_tol = opt.rel_tol;
  problem.abs_tol = opt.abs_tol;
  problem.rhs = [&sampler, domain](double t, std::span<const Complex> y, std::span<Complex> dy) {
    const double x = y[0].real();
    if (domain && (x < domain->first || x > domain->second)) {
      throw SingularityError("real trajectory reached the Poschl-Teller wall");
    }
    dy[0] = fields_real(sampler, x, t).v;
  };
  Trajectory out = from_path(adaptive_ode(problem, ode_options(opt)), false, sampler.mass);
  out.metadata = metadata(sampler, opt, "real", x0);
  return out;
}

Trajectory trajectory_complex(const WaveSampler& sampler, Complex z0, const TrajectoryOptions& opt) {
  require_finite(z0, "z0");
  OdeProblem problem;
  problem.y0 = {z0};
  problem.t0 = opt.t0;
  problem.t1 = opt.t1;
  problem.rel_tol = opt.rel_tol;
  problem.abs_tol = opt.abs_tol;
  problem.rhs = [&sampler](double t, std::span<const Complex> y, std::span<Complex> dy) {
    dy[0] = fields_complex(sampler, y[0], t).v;
  };
  Trajectory out = from_path(adaptive_ode(problem, ode_options(opt)), false, sampler.mass);
  out.metadata = metadata(sampler, opt, "complex", z0);
  return out;
}

double quantum_force(const WaveSampler& sampler, double x, double t) {
  const double h = 1e-5 * std::max(1.0, std::abs(x));
  auto q = [&](double s) { return fields_real(sampler, s, t).Q; };
  return (-q(x + 2.0 * h) + 8.0 * q(x + h) - 8.0 * q(x - h) + q(x - 2.0 * h)) / (12.0 * h);
}

Trajectory newton_effective(const WaveSampler& sampler, double x0, double v0,
                            const TrajectoryOptions& opt) {
  require_finite(x0, "x0");
  require_finite(v0, "v0");
  if (!sampler.model) throw DomainError("newton_effective needs a sampler with a model");
  const double v_bohm = fields_real(sampler, x0, opt.t0).v;
  if (std::abs(v0 - v_bohm) > 1e-6 * std::max(1.0, std::abs(v_bohm))) {
    throw DomainError("initial velocity must equal the Bohmian velocity " + format_number(v_bohm));
  }
  const Model model = *sampler.model;
  const auto domain = real_domain(sampler);
  OdeProblem problem;
  problem.y0 = {Complex(x0, 0.0), Complex(v0, 0.0)};
  problem.t0 = opt.t0;
  problem.t1 = opt.t1;
  problem.rel_tol = opt.rel_tol;
  problem.abs_tol = opt.abs_tol;
  problem.rhs = [&sampler, model, domain](double t, std::span<const Complex> y,
                                          std::span<Complex> dy) {
    const double x = y[0].real();
    if (domain && (x < domain->first || x > domain->second)) {
      throw SingularityError("path reached the Poschl-Teller wall");
    }
    const double force = -(potential_derivative(model, x).real() + quantum_force(sampler, x, t));
    dy[0] = y[1].real();
    dy[1] = force / sampler.mass;
  };
  Trajectory out = from_path(adaptive_ode(problem, ode_options(opt)), true, sampler.mass);
  out.metadata = metadata(sampler, opt, "newton", x0);
  out.metadata.p0 = sampler.mass * v0;
  return out;
}

Trajectory ensemble_mean(const std::vector<Trajectory>& paths) {
  if (paths.empty()) throw DomainError("ensemble_mean needs at least one trajectory");
  for (const auto& p : paths) {
    if (p.times.empty()) throw DomainError("ensemble_mean got an empty trajectory");
  }
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (const auto& p : paths) {
    lo = std::max(lo, std::min(p.times.front(), p.times.back()));
    hi = std::min(hi, std::max(p.times.front(), p.times.back()));
  }
  Trajectory out;
  out.metadata = paths.front().metadata;
  out.metadata.variant = "ensemble-mean";
  for (double t : paths.front().times) {
    if (t >= lo && t <= hi) out.times.push_back(t);
  }
  out.x.assign(out.times.size(), Complex{});
  for (const auto& p : paths) {
    const bool same_grid = p.times == paths.front().times && out.times.size() == p.times.size();
    const bool ascending = p.times.size() < 2 || p.times[1] > p.times[0];
    for (std::size_t i = 0; i < out.times.size(); ++i) {
      if (same_grid) {
        out.x[i] += p.x[i];
        continue;
      }
      const double t = out.times[i];
      auto less = [ascending](double a, double b) { return ascending ? a < b : a > b; };
      auto it = std::lower_bound(p.times.begin(), p.times.end(), t, less);
      std::size_t j = static_cast<std::size_t>(it - p.times.begin());
      if (j == 0) {
        out.x[i] += p.x[0];
      } else if (j >= p.times.size()) {
        out.x[i] += p.x.back();
      } else {
        const double w = (t - p.times[j - 1]) / (p.times[j] - p.times[j - 1]);
        out.x[i] += (1.0 - w) * p.x[j - 1] + w * p.x[j];
      }
    }
    if (p.status != OdeStatus::Completed && out.status == OdeStatus::Completed) {
      out.status = p.status;
      out.diagnostic = p.diagnostic;
    }
  }
  for (auto& x : out.x) x /= static_cast<double>(paths.size());
  return out;
}

std::vector<FieldSample> fields_along(const WaveSampler& sampler, const Trajectory& path) {
  const bool real = path.metadata.variant == "real" || path.metadata.variant == "newton";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<FieldSample> out;
  out.reserve(path.times.size());
  for (std::size_t i = 0; i < path.times.size(); ++i) {
    try {
      if (real) {
        const RealFields f = fields_real(sampler, path.x[i].real(), path.times[i]);
        out.push_back({f.v, f.Q});
      } else {
        const ComplexFields f = fields_complex(sampler, path.x[i], path.times[i]);
        out.push_back({f.v, f.Q});
      }
    } catch (const Error&) {
      out.push_back({Complex(nan, nan), Complex(nan, nan)});
    }
  }
  return out;
}

Oscillation first_oscillation(const Trajectory& path) {
  Oscillation out;
  const auto& t = path.times;
  const std::size_t n = std::min(t.size(), path.x.size());
  if (n < 3) return out;
  // vertex of the parabola through (t[k-1..k+1], y[k-1..k+1])
  auto vertex = [&](std::size_t k) {
    const double y0 = path.x[k - 1].real(), y1 = path.x[k].real(), y2 = path.x[k + 1].real();
    const double h = t[k + 1] - t[k];
    const double den = y0 - 2.0 * y1 + y2;
    if (den == 0.0) return std::pair{t[k], y1};
    const double s = 0.5 * (y0 - y2) / den;
    return std::pair{t[k] + s * h, y1 - 0.25 * (y0 - y2) * s};
  };
  // next sample index where the motion reverses relative to direction `up`
  auto reversal = [&](std::size_t from, bool up) {
    std::size_t k = from;
    while (k + 1 < n) {
      const double step = path.x[k + 1].real() - path.x[k].real();
      if (up ? step < 0.0 : step > 0.0) break;
      ++k;
    }
    return k;
  };
  std::size_t start = 0;
  while (start + 1 < n && path.x[start + 1].real() == path.x[start].real()) ++start;
  if (start + 1 >= n) return out;
  const bool up = path.x[start + 1].real() > path.x[start].real();
  std::size_t k = reversal(start + 1, up);
  if (k + 1 >= n || k == 0) return out;
  const auto [t_max, x_max] = vertex(k);
  k = reversal(k + 1, !up);
  if (k + 1 >= n) return out;
  out.found = true;
  out.max = x_max;
  out.t_max = t_max;
  out.period = vertex(k).first - t.front();
  return out;
}

}  // namespace bohmtraj
