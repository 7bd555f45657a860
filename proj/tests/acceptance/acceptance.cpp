// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "bohmtraj/bohmian.hpp"
#include "bohmtraj/classical.hpp"
#include "bohmtraj/cli.hpp"
#include "bohmtraj/coherent.hpp"
#include "bohmtraj/error.hpp"
#include "bohmtraj/isochrone.hpp"

using namespace bohmtraj;

namespace {

const PtModel kNarrow{1.0, 2.0, 90.0, 100.0, 1.0};
const PtModel kBroad{1.0, 2.0, 2.0, 3.0, 1.0};
const Complex I(0.0, 1.0);

struct Sub {
  std::string what;
  double value;
  double bound;
  bool ok;
};

class Criterion {
 public:
  // |value| <= bound
  void within(const std::string& what, double value, double bound) {
    subs_.push_back({what, value, bound, std::isfinite(value) && std::abs(value) <= bound});
  }
  void require(const std::string& what, bool ok) { subs_.push_back({what, ok ? 1.0 : 0.0, 1.0, ok}); }
  void note(const std::string& line) { notes_.push_back(line); }

  bool passed() const {
    for (const Sub& s : subs_)
      if (!s.ok) return false;
    return !subs_.empty();
  }
  const std::vector<Sub>& subs() const { return subs_; }
  const std::vector<std::string>& notes() const { return notes_; }

 private:
  std::vector<Sub> subs_;
  std::vector<std::string> notes_;
};

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

TrajectoryOptions span(double t1, int samples, double rel_tol = 1e-11, double abs_tol = 1e-13) {
  TrajectoryOptions o;
  o.t1 = t1;
  o.samples = samples;
  o.rel_tol = rel_tol;
  o.abs_tol = abs_tol;
  return o;
}

TrajectoryOptions from_config(const ScenarioConfig& c, double t1) {
  return span(t1, c.samples, c.rel_tol, c.abs_tol);
}

double sup_abs(const Trajectory& a, const std::function<Complex(double)>& ref) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.times.size(); ++k) d = std::max(d, std::abs(a.x[k] - ref(a.times[k])));
  return d;
}

double sup_between(const Trajectory& a, const Trajectory& b) {
  if (a.x.size() != b.x.size()) return std::nan("");
  double d = 0.0;
  for (std::size_t k = 0; k < a.x.size(); ++k) d = std::max(d, std::abs(a.x[k] - b.x[k]));
  return d;
}

// sup |xq - xc| / sup |xc| over the samples both paths reached
double relative_sup(const Trajectory& q, const Trajectory& c) {
  const std::size_t n = std::min(q.x.size(), c.x.size());
  double diff = 0.0, scale = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    diff = std::max(diff, std::abs(q.x[k] - c.x[k]));
    scale = std::max(scale, std::abs(c.x[k]));
  }
  return n == 0 ? std::nan("") : diff / scale;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string fmt9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string fmt(Complex z) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g%+.9gi", z.real(), z.imag());
  return buf;
}

// ---------------------------------------------------------------------------

void peaks(Criterion& c) {
  const double J[] = {0.5, 1.0, 2.0, 3.0}, expect[] = {1.0, 1.4142, 2.0, 2.4495};
  for (int k = 0; k < 4; ++k) {
    const double got = peak_position(KlauderState::build(HoModel{}, J[k])).position;
    c.within("x_max(J=" + fmt(J[k]) + ") = " + fmt(got), got - expect[k], 2e-3);
  }
}

void ho_real_conjecture(Criterion& c) {
  const HoModel ho;
  const KlauderState s = KlauderState::build(ho, 2.0);
  const Trajectory tr = trajectory_real(klauder_sampler(s), 2.0, span(4 * kPi, 1257));
  c.require("trajectory completed", tr.completed());
  ConjectureParams p;
  p.x0 = 2.0;
  p.x_max = peak_position(s).position;
  const double d = sup_abs(tr, [&](double t) { return Complex(conjecture_ho(ho, p, t).x); });
  c.within("sup |x - x_conj|", d, 2e-3);
}

void ho_mandel(Criterion& c) {
  for (double J : {0.1, 1.0, 10.0}) c.within("Q(J=" + fmt(J) + ")", mandel_q(HoModel{}, J), 1e-12);
}

void stationary_real(Criterion& c) {
  struct Case {
    Model model;
    int n;
  };
  const Case cases[] = {{HoModel{}, 0}, {HoModel{}, 1}, {HoModel{}, 5}, {kBroad, 0}, {kBroad, 1}, {kBroad, 3}};
  for (const Case& k : cases) {
    const WaveSampler s = stationary_sampler(k.model, k.n);
    const bool ho = std::holds_alternative<HoModel>(k.model);
    const double lo = ho ? -4.0 : 0.05, hi = ho ? 4.0 : kBroad.width() - 0.05;
    const double e = energy_level(k.model, k.n);
    double v_max = 0.0, resid = 0.0;
    for (int j = 0; j <= 400; ++j) {
      const double x = lo + (hi - lo) * (j + 0.5) / 401.0;
      for (double t : {0.0, 1.3}) {
        RealFields f;
        try {
          f = fields_real(s, x, t);
        } catch (const NodeError&) {
          continue;
        }
        const double v = potential(k.model, x).real();
        v_max = std::max(v_max, std::abs(f.v));
        resid = std::max(resid, std::abs(f.Q + v - e) / std::max({1.0, std::abs(v), std::abs(e)}));
      }
    }
    const std::string tag = model_name(k.model) + " n=" + std::to_string(k.n);
    c.within(tag + " max |v|", v_max, 1e-10);
    c.within(tag + " max rel |Q+V-E|", resid, 1e-6);
  }
}

void ho_complex_stationary(Criterion& c) {
  const HoModel ho;
  const double l2 = ho.hbar / (ho.mass * ho.omega);
  for (Complex z0 : {Complex(0.5, 0.0), Complex(2.5, 0.0), Complex(1.0, 1.0), Complex(-1.0, 0.5)}) {
    const Trajectory t0 = trajectory_complex(stationary_sampler(ho, 0), z0, span(2 * kPi, 629));
    c.require("n=0 path from " + fmt(z0) + " completed", t0.completed());
    c.within("n=0 sup |x - x0 e^{iwt}| from " + fmt(z0),
             sup_abs(t0, [&](double t) { return z0 * std::exp(I * ho.omega * t); }), 1e-6);

    const Trajectory t1 = trajectory_complex(stationary_sampler(ho, 1), z0, span(2 * kPi, 629));
    c.require("n=1 path from " + fmt(z0) + " completed", t1.completed());
    // z^2 = (z0^2 - l^2) e^{2iwt} + l^2, branch followed by continuity
    Complex prev = z0;
    double d = 0.0;
    for (std::size_t k = 0; k < t1.times.size(); ++k) {
      Complex r = std::sqrt((z0 * z0 - l2) * std::exp(2.0 * I * ho.omega * t1.times[k]) + l2);
      if (std::abs(r - prev) > std::abs(-r - prev)) r = -r;
      prev = r;
      d = std::max(d, std::abs(t1.x[k] - r));
    }
    c.within("n=1 sup |x - sqrt form| from " + fmt(z0), d, 1e-6);
  }
  const auto fp = fixed_points(ho, 5);
  const double expect[] = {-2.75624, -1.47524, -0.476251, 0.476251, 1.47524, 2.75624};
  c.require("six fixed points of v~_5", fp.size() == 6);
  for (std::size_t k = 0; k < fp.size() && k < 6; ++k)
    c.within("fixed point " + fmt(fp[k].z), std::abs(fp[k].z - expect[k]), 1e-5);
}

void ho_gaussian_match(Criterion& c) {
  const HoModel ho;
  const KlauderState s = KlauderState::build(ho, 2.0);
  const Complex z0(3.0, 1.0);
  const Trajectory q = trajectory_complex(klauder_sampler(s), z0, span(2 * kPi, 629));
  c.require("quantum path completed", q.completed());
  const PhasePoint start = init_momentum(z0, peak_position(s).position, ho);
  c.within("sup |x_q - x_cl|", sup_abs(q, [&](double t) { return ho_flow_analytic(ho, start, t); }), 1e-2);
}

void pt_mandel(Criterion& c) {
  const double q_narrow = mandel_q(kNarrow, 2.0), q_broad = mandel_q(kBroad, 0.0022906);
  c.within("Q(J=2, kappa+lambda=190) = " + std::to_string(q_narrow), q_narrow + 0.000054529, 1e-7);
  c.within("Q(J=0.0022906, kappa+lambda=5) = " + std::to_string(q_broad), q_broad + 0.000054529, 1e-7);
  c.within("difference of the pair", q_narrow - q_broad, 1e-8);
  c.within("Q(J=10, 5)", mandel_q(kBroad, 10.0) + 0.149523, 1e-5);
  c.within("Q(J=20, 5)", mandel_q(kBroad, 20.0) + 0.218944, 1e-5);
}

void pt_real_period(Criterion& c) {
  {
    const KlauderState s = KlauderState::build(kNarrow, 2.0);
    const Trajectory tr = trajectory_real(klauder_sampler(s), 2.0, span(0.8, 8001));
    const Oscillation o = first_oscillation(tr);
    c.require("narrow well oscillation found", o.found);
    c.within("narrow max " + std::to_string(o.max), (o.max - 2.0504447) / 2.0504447, 0.01);
    c.within("narrow period " + std::to_string(o.period), (o.period - 0.2612875) / 0.2612875, 0.01);
  }
  {
    const KlauderState s = KlauderState::build(kBroad, 0.0022906);
    const Trajectory tr = trajectory_real(klauder_sampler(s), 2.0, span(33.0, 33001));
    const Oscillation o = first_oscillation(tr);
    c.require("broad well oscillation found", o.found);
    c.within("broad period " + std::to_string(o.period), (o.period - 8.34795) / 8.34795, 0.01);
  }
}

struct EnergyCase {
  const char* label;
  PtModel model;
  PhasePoint start;
  Complex expected;
};

const EnergyCase kEnergies[] = {
    {"fig5b", kNarrow, {Complex(3, -1.7), Complex(32.907, 3.16416)}, Complex(-8.44045, 102.134)},
    {"fig11 complex", kNarrow, {Complex(3, 1.5), Complex(-30.1922, 0.385121)}, Complex(-6.55991, -13.5182)},
    {"fig11 real", kNarrow, {Complex(4.5, 0), Complex(0, 41.8376)}, Complex(-31.7564, 0)},
    {"fig12 complex", kBroad, {Complex(3, 1.5), Complex(-0.788329, 0.157336)}, Complex(-0.187539, -0.0275087)},
    {"fig12 real", kBroad, {Complex(2, 0), Complex(0, -0.49446)}, Complex(-0.277833, 0)},
    {"fig13", kBroad, {Complex(2, 0.2), Complex(-0.665052, -0.406733)}, Complex(-0.0941366, -0.364635)},
};

void reference_energies(Criterion& c) {
  for (const EnergyCase& e : kEnergies) {
    const Complex h = energy(e.model, e.start);
    c.within(std::string(e.label) + " H = " + fmt(h) + " vs " + fmt(e.expected), rel(h, e.expected), 1e-3);
  }
}

// Starting points of the fig5a isochrone together with the fig5a state.
struct IsochroneSetup {
  ScenarioConfig config;
  std::shared_ptr<const KlauderState> state;
  WaveSampler sampler;
  IsochroneResult iso;
};

const IsochroneSetup& fig5a() {
  static const IsochroneSetup setup = [] {
    IsochroneSetup s;
    s.config = preset("fig5a");
    s.state = std::make_shared<const KlauderState>(KlauderState::build(s.config.model, s.config.J.at(0)));
    s.sampler = klauder_sampler(s.state);
    IsochroneOptions opt;
    opt.n_points = s.config.isochrone_points;
    opt.threads = thread_budget();
    s.iso = find_isochrone(s.sampler, s.config.isochrone_t, {s.config.seed_start, s.config.seed_end}, opt);
    return s;
  }();
  return setup;
}

void check_conservation(Criterion& c, const std::string& label, const Model& model, PhasePoint start,
                        const TrajectoryOptions& opt) {
  const Trajectory tr = complex_hamilton_flow(model, start, opt);
  c.require(label + " flow completed", tr.completed());
  const Complex h0 = energy(model, start);
  double drift = 0.0;
  for (std::size_t k = 0; k < tr.x.size(); ++k)
    drift = std::max(drift, std::abs(energy(model, {tr.x[k], tr.p[k]}) - h0));
  c.within(label + " max |H(t)-H(0)|/(1+|H(0)|)", drift / (1 + std::abs(h0)), 1e-6);
}

void classical_conservation(Criterion& c) {
  const IsochroneSetup& s = fig5a();
  const ScenarioConfig& cf = s.config;
  for (std::size_t q = 0; q < s.iso.points.size(); ++q) {
    const Complex z0 = s.iso.points[q];
    const PhasePoint start{z0, s.sampler.mass * fields_complex(s.sampler, z0, 0.0).v};
    const double horizon = cf.t1_classical > 0 ? cf.t1_classical : cf.t1;
    check_conservation(c, "fig5a point " + std::to_string(q), cf.model, start, from_config(cf, horizon));
  }
  for (const char* id : {"fig5b", "fig11", "fig12", "fig13"}) {
    const ScenarioConfig cf = preset(id);
    const double horizon = cf.t1_classical > 0 ? cf.t1_classical : cf.t1;
    for (std::size_t k = 0; k < cf.x0.size(); ++k)
      check_conservation(c, std::string(id) + " start " + std::to_string(k), cf.model, {cf.x0[k], cf.p0.at(k)},
                         from_config(cf, horizon));
  }
}

void quasi_poissonian_match(Criterion& c) {
  const IsochroneSetup& s = fig5a();
  const ScenarioConfig& cf = s.config;
  c.require("isochrone has points", !s.iso.points.empty());
  double worst = 0.0;
  for (std::size_t q = 0; q < s.iso.points.size(); ++q) {
    const Complex z0 = s.iso.points[q];
    const TrajectoryOptions opt = from_config(cf, 0.27);
    const Trajectory qt = trajectory_complex(s.sampler, z0, opt);
    const Trajectory ct = complex_hamilton_flow(cf.model, {z0, s.sampler.mass * fields_complex(s.sampler, z0, 0.0).v}, opt);
    c.require("point " + std::to_string(q) + " paths completed", qt.completed() && ct.completed());
    worst = std::max(worst, relative_sup(qt, ct));
  }
  c.within("worst relative sup separation (quasi-Poissonian)", worst, 0.03);

  const ScenarioConfig f13 = preset("fig13");
  const KlauderState st = KlauderState::build(f13.model, f13.J.at(0));
  const TrajectoryOptions opt = from_config(f13, f13.t1);
  const Trajectory qt = trajectory_complex(klauder_sampler(st), f13.x0.at(0), opt);
  const Trajectory ct = complex_hamilton_flow(f13.model, {f13.x0.at(0), f13.p0.at(0)}, opt);
  const double sub = relative_sup(qt, ct);
  c.note("sub-Poissonian separation " + fmt(sub) + " vs quasi-Poissonian " + fmt(worst));
  c.require("sub-Poissonian separation " + fmt(sub) + " > 5 x " + fmt(worst), sub > 5 * worst);
}

void uncertainty(Criterion& c) {
  {
    const KlauderState s = KlauderState::build(kNarrow, 0.1);
    const double period = 2 * kPi / (s.omega() * s.spectral().at(1));
    double sum = 0.0, lo = 1e300, hi = -1e300;
    const int n = 60;
    for (int k = 0; k < n; ++k) {
      const double u = moments(s, period * k / n).uncertainty_product;
      sum += u;
      lo = std::min(lo, u);
      hi = std::max(hi, u);
    }
    const double mean = sum / n;
    c.note("narrow well: mean " + fmt9(mean) + " range [" + fmt9(lo) + ", " + fmt9(hi) + "]");
    c.within("narrow mean - 0.5000065", mean - 0.5000065, 2e-6);
    c.within("narrow amplitude", 0.5 * (hi - lo), 2e-6);
  }
  for (double J : {0.0022906, 0.00057265, 0.000114531}) {
    const KlauderState s = KlauderState::build(kBroad, J);
    const double period = 2 * kPi / (s.omega() * s.spectral().at(1));
    double sum = 0.0;
    const int n = 60;
    for (int k = 0; k < n; ++k) sum += moments(s, period * k / n).uncertainty_product;
    const double mean = sum / n;
    if (J == 0.0022906)
      c.within("broad mean " + fmt9(mean) + " in [0.509, 0.512]", std::abs(mean - 0.5105), 0.0015);
    else
      c.note("broad J=" + fmt(J) + " mean " + fmt9(mean));
  }
}

void isochrone(Criterion& c) {
  const IsochroneSetup& s = fig5a();
  c.require("isochrone has points", !s.iso.points.empty());
  if (!s.iso.skipped.empty()) c.note(std::to_string(s.iso.skipped.size()) + " anchors produced no point");
  for (std::size_t q = 0; q < s.iso.points.size(); ++q) {
    const double off = arrival_offset(s.sampler, s.iso.points[q], s.config.isochrone_t, 1e-12);
    c.within("point " + std::to_string(q) + " |Im x(t_f)|", off, 1e-6);
  }
}

void oracles(Criterion& c) {
  std::mt19937_64 rng(14);
  auto uni = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
  const HoModel ho;
  const double w = ho.omega, hb = ho.hbar, m = ho.mass;

  double e0 = 0.0, e1 = 0.0;
  const WaveSampler s0 = stationary_sampler(ho, 0), s1 = stationary_sampler(ho, 1);
  for (int k = 0; k < 100; ++k) {
    const Complex z(uni(-3, 3), uni(-2, 2));
    const double t = uni(0, 5);
    const ComplexFields f0 = fields_complex(s0, z, t), f1 = fields_complex(s1, z, t);
    e0 = std::max({e0, rel(f0.v, I * w * z), rel(f0.Q, hb * w / 2)});
    e1 = std::max({e1, rel(f1.v, I * w * z - I * hb / (m * z)), rel(f1.Q, hb * w / 2 + hb * hb / (2 * m * z * z))});
  }
  c.within("HO n=0 complex fields", e0, 1e-8);
  c.within("HO n=1 complex fields", e1, 1e-8);

  struct Case {
    const char* label;
    Model model;
    int n;
  };
  for (const Case& k : {Case{"HO n=5", ho, 5}, Case{"PT n=0", kBroad, 0}, Case{"PT n=1", kBroad, 1},
                        Case{"PT narrow n=1", kNarrow, 1}}) {
    const WaveSampler s = stationary_sampler(k.model, k.n);
    const bool is_ho = std::holds_alternative<HoModel>(k.model);
    double err = 0.0;
    for (int done = 0; done < 100;) {
      const Complex z = is_ho ? Complex(uni(-3, 3), uni(-1.5, 1.5)) : Complex(uni(0.3, 6.0), uni(-1, 1));
      const double t = uni(0, 4);
      try {
        const StationaryOracle o = stationary_oracles(k.model, k.n, z, t);
        const ComplexFields f = fields_complex(s, z, t);
        err = std::max({err, rel(f.v, o.v), rel(f.Q, o.Q)});
        ++done;
      } catch (const SingularityError&) {
      }
    }
    c.within(std::string(k.label) + " complex fields", err, 1e-8);
  }

  const double a = 1.5;
  const WaveSampler g = gaussian_sampler(ho, a);
  double er = 0.0, ec = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double x = uni(-3, 5), t = uni(0, 6);
    const RealFields f = fields_real(g, x, t);
    const double d = x - a * std::cos(w * t);
    const double v_ref = -a * w * std::sin(w * t), q_ref = hb * w / 2 - 0.5 * m * w * w * d * d;
    er = std::max({er, std::abs(f.v - v_ref) / std::max(1.0, std::abs(v_ref)),
                   std::abs(f.Q - q_ref) / std::max(1.0, std::abs(q_ref))});
    const Complex z(uni(-3, 5), uni(-2, 2));
    const ComplexFields fc = fields_complex(g, z, t);
    const Complex vc = -w * (z.imag() + a * std::sin(w * t)) + I * w * (z.real() - a * std::cos(w * t));
    ec = std::max({ec, std::abs(fc.v - vc) / std::max(1.0, std::abs(vc)), rel(fc.Q, hb * w / 2)});
  }
  c.within("Gaussian real fields", er, 1e-8);
  c.within("Gaussian complex fields", ec, 1e-8);

  auto newton_vs_real = [&](const std::string& label, const WaveSampler& s, double x0) {
    const TrajectoryOptions opt = span(2 * kPi, 629);
    const Trajectory r = trajectory_real(s, x0, opt);
    const Trajectory n = newton_effective(s, x0, fields_real(s, x0, 0.0).v, opt);
    c.require(label + " paths completed", r.completed() && n.completed());
    c.within(label + " real vs Newton", sup_between(r, n), 1e-4);
  };
  for (int n : {0, 1, 5}) newton_vs_real("HO n=" + std::to_string(n), stationary_sampler(ho, n), 0.3);
  for (int n : {0, 1, 3}) newton_vs_real("PT n=" + std::to_string(n), stationary_sampler(kBroad, n), 2.2);
  const KlauderState k2 = KlauderState::build(ho, 2.0);
  newton_vs_real("HO Klauder J=2", klauder_sampler(k2), 2.0);

  auto forms = [&](const std::string& label, const Model& model, PhasePoint start, const TrajectoryOptions& opt) {
    const Trajectory h = complex_hamilton_flow(model, start, opt, FlowForm::Holomorphic);
    const Trajectory sp = complex_hamilton_flow(model, start, opt, FlowForm::Split);
    c.require(label + " flows completed", h.completed() && sp.completed());
    c.within(label + " holomorphic vs split", sup_between(h, sp), 1e-8);
  };
  forms("HO", ho, {Complex(3, 1), Complex(-1, 2)}, span(2 * kPi, 629, 1e-12, 1e-14));
  for (const char* id : {"fig5b", "fig11", "fig12", "fig13"}) {
    const ScenarioConfig cf = preset(id);
    const double horizon = cf.t1_classical > 0 ? cf.t1_classical : cf.t1;
    for (std::size_t k = 0; k < cf.x0.size(); ++k)
      forms(std::string(id) + " start " + std::to_string(k), cf.model, {cf.x0[k], cf.p0.at(k)},
            from_config(cf, horizon));
  }
}

struct Entry {
  int id;
  const char* title;
  void (*run)(Criterion&);
};

const Entry kCriteria[] = {
    {1, "HO peak positions", peaks},
    {2, "HO real Klauder path vs conjectured path", ho_real_conjecture},
    {3, "HO Mandel parameter vanishes", ho_mandel},
    {4, "stationary real fields", stationary_real},
    {5, "HO complex stationary closed forms and fixed points", ho_complex_stationary},
    {6, "HO Klauder complex path vs classical flow", ho_gaussian_match},
    {7, "PT Mandel values and degeneracy", pt_mandel},
    {8, "PT real oscillation maximum and period", pt_real_period},
    {9, "PT reference energies", reference_energies},
    {10, "complex classical energy conservation", classical_conservation},
    {11, "PT complex quantum vs classical paths", quasi_poissonian_match},
    {12, "uncertainty product", uncertainty},
    {13, "isochrone arrival on the real axis", isochrone},
    {14, "oracle equivalences", oracles},
};

}  // namespace

int main(int argc, char** argv) {
  const bool verbose = argc > 1 && std::string(argv[1]) == "-v";
  int failures = 0;
  for (const Entry& e : kCriteria) {
    Criterion c;
    const auto start = std::chrono::steady_clock::now();
    std::string error;
    try {
      e.run(c);
    } catch (const std::exception& ex) {
      error = ex.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool ok = error.empty() && c.passed();
    failures += ok ? 0 : 1;
    std::printf("%s criterion %2d: %s (%zu checks, %.1fs)\n", ok ? "PASS" : "FAIL", e.id, e.title, c.subs().size(), secs);
    if (!error.empty()) std::printf("    error: %s\n", error.c_str());
    for (const Sub& s : c.subs())
      if (!s.ok || verbose) std::printf("    %s %s: %.3e (bound %.1e)\n", s.ok ? "ok  " : "FAIL", s.what.c_str(), s.value, s.bound);
    for (const std::string& n : c.notes()) std::printf("    note: %s\n", n.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(kCriteria)) - failures, std::size(kCriteria));
  return failures == 0 ? 0 : 1;
}
