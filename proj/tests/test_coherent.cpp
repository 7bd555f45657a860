#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>

#include "bohmtraj/coherent.hpp"
#include "bohmtraj/error.hpp"
#include "support/generators.hpp"

using namespace bohmtraj;

namespace {
const PtModel kNarrow{1.0, 2.0, 90.0, 100.0, 1.0};
const PtModel kBroad{};
}  // namespace

TEST_CASE("HO Klauder weights are Poissonian") {
  for (double J : {0.1, 2.0, 7.5}) {
    const KlauderState s = KlauderState::build(HoModel{}, J);
    for (int n = 0; n <= s.truncation(); ++n) {
      const double poisson = std::exp(-J + n * std::log(J) - std::lgamma(n + 1.0));
      CHECK(s.coeffs()[n] * s.coeffs()[n] == doctest::Approx(poisson).epsilon(1e-12));
    }
    CHECK(s.norm() == doctest::Approx(std::exp(J / 2)).epsilon(1e-14));
    CHECK(s.warning().empty());
  }
}

TEST_CASE("weights sum to one and the tail bound is honoured") {
  gen::Source src(2);
  for (int trial = 0; trial < 30; ++trial) {
    const double J = std::exp(src.real(std::log(1e-4), std::log(40.0)));
    for (const Model& m : {Model(HoModel{}), Model(kBroad), Model(kNarrow)}) {
      const KlauderState s = KlauderState::build(m, J);
      double sum = 0.0;
      for (double c : s.coeffs()) sum += c * c;
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
      CHECK(s.tail_bound() <= 1e-16);
    }
  }
}

TEST_CASE("PT normalization closed form") {
  for (double J : {0.001, 0.5, 20.0}) {
    const KlauderState s = KlauderState::build(kBroad, J);
    CHECK(s.norm() == doctest::Approx(std::sqrt(hyp0f1(1 + kBroad.kappa + kBroad.lambda, J))).epsilon(1e-13));
    double direct = 0.0;
    for (int n = 0; n <= s.truncation(); ++n)
      direct += std::exp(n * std::log(J) - std::lgamma(n + 1.0) - log_pochhammer(1 + kBroad.kappa + kBroad.lambda, n));
    CHECK(s.norm() * s.norm() == doctest::Approx(direct).epsilon(1e-13));
  }
}

TEST_CASE("occupation statistics: series against closed forms") {
  gen::Source src(4);
  for (int trial = 0; trial < 30; ++trial) {
    const double J = src.real(0.01, 30.0);
    for (const Model& m : {Model(HoModel{}), Model(kBroad), Model(kNarrow)}) {
      const KlauderState s = KlauderState::build(m, J);
      const double mean = mean_occupation(s);
      CHECK(mean == doctest::Approx(mean_occupation_formula(m, J)).epsilon(1e-11));
      // dispersion identity Var(n) = <n> (Q + 1)
      CHECK(occupation_variance(s) == doctest::Approx(mean * (mandel_q(m, J) + 1)).epsilon(1e-9));
    }
  }
}

TEST_CASE("Mandel parameter: HO vanishes, PT is negative and decreasing in J") {
  for (double J : {0.1, 1.0, 10.0}) CHECK(mandel_q(HoModel{}, J) == 0.0);
  CHECK(mandel_q(kBroad, 0.0) == 0.0);
  gen::Source src(9);
  for (int trial = 0; trial < 50; ++trial) {
    double a = src.real(1e-4, 40.0), b = src.real(1e-4, 40.0);
    if (a > b) std::swap(a, b);
    if (b - a < 1e-6) continue;
    CHECK(mandel_q(kBroad, a) < 0.0);
    CHECK(mandel_q(kBroad, b) < mandel_q(kBroad, a));
  }
  CHECK(mandel_q(kNarrow, 2.0) == doctest::Approx(-5.4528662e-5).epsilon(1e-6));
  CHECK(mandel_q(kBroad, 5.0) == doctest::Approx(-0.0917752).epsilon(1e-6));
}

TEST_CASE("J = 0 is the ground state") {
  const KlauderState s = KlauderState::build(kBroad, 0.0);
  CHECK(s.truncation() == 0);
  const Complex z(2.0, 0.3);
  CHECK(gen::rel_err(s.evaluate(z, 1.7).psi, eigen(kBroad, 0, z).phi) < 1e-14);
}

TEST_CASE("truncated evaluation at the full order equals evaluate") {
  const KlauderState s = KlauderState::build(kNarrow, 2.0);
  const Complex z(3.0, -0.4);
  const WaveSample a = s.evaluate(z, 0.13), b = s.evaluate_truncated(z, 0.13, s.truncation());
  CHECK(gen::rel_err(a.psi, b.psi) < 1e-15);
  CHECK(gen::rel_err(a.ddpsi, b.ddpsi) < 1e-15);
}

TEST_CASE("psi_J solves the time-dependent Schrodinger equation") {
  gen::Source src(13);
  const double dt = 1e-5;
  for (const Model& m : {Model(HoModel{}), Model(kBroad)}) {
    const KlauderState s = KlauderState::build(m, 1.5);
    const double hb = hbar(m), ms = mass(m);
    const double shift = std::holds_alternative<HoModel>(m) ? 0.5 * hb * model_omega(m) : 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const Complex z = std::holds_alternative<HoModel>(m) ? src.complex(-3, 3, -1, 1) : src.complex(1, 5, -0.5, 0.5);
      const double t = src.real(0, 3);
      const WaveSample w = s.evaluate(z, t);
      const Complex dpsi_dt = (s.evaluate(z, t + dt).psi - s.evaluate(z, t - dt).psi) / (2 * dt);
      // energies are measured from the ground state, so H carries -shift
      const Complex h_psi = -hb * hb / (2 * ms) * w.ddpsi + (potential(m, z) - shift) * w.psi;
      CHECK(gen::rel_err(Complex(0, hb) * dpsi_dt, h_psi) < 1e-6);
    }
  }
}

TEST_CASE("HO peak positions") {
  for (double J : {0.5, 1.0, 2.0, 3.0}) {
    const PeakResult p = peak_position(KlauderState::build(HoModel{}, J));
    CHECK(p.position == doctest::Approx(std::sqrt(2 * J)).epsilon(1e-6));
    CHECK_FALSE(p.multimodal);
  }
}

TEST_CASE("HO moments: minimal uncertainty, centre on the classical orbit, action identity") {
  const HoModel ho;
  const double J = 2.0;
  const KlauderState s = KlauderState::build(ho, J);
  for (double t : {0.0, 0.7, 2.1}) {
    const MomentReport r = moments(s, t);
    CHECK(r.norm == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.mean_x == doctest::Approx(std::sqrt(2 * J) * std::cos(t)).epsilon(1e-9));
    CHECK(r.mean_p == doctest::Approx(-std::sqrt(2 * J) * std::sin(t)).epsilon(1e-9));
    CHECK(r.uncertainty_product == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(r.mean_H == doctest::Approx(J).epsilon(1e-9));
    CHECK(r.mean_p2 == doctest::Approx(r.mean_p2_gradient).epsilon(1e-9));
  }
}

TEST_CASE("PT moments stay above the uncertainty bound") {
  const KlauderState s = KlauderState::build(kBroad, 2.0);
  for (double t : {0.0, 3.0, 6.0}) {
    const MomentReport r = moments(s, t);
    CHECK(r.uncertainty_product >= 0.5);
    CHECK(r.mean_x > 0.0);
    CHECK(r.mean_x < kBroad.width());
  }
}

TEST_CASE("density snapshots integrate to one") {
  const KlauderState s = KlauderState::build(kBroad, 0.5);
  const int n = 4001;
  std::vector<double> grid(n);
  for (int k = 0; k < n; ++k) grid[k] = 1e-6 + (kBroad.width() - 2e-6) * k / (n - 1);
  const auto d = density_snapshot(s, grid, 1.3);
  double sum = 0.0;
  for (int k = 1; k < n; ++k) sum += 0.5 * (d[k].density + d[k - 1].density) * (grid[k] - grid[k - 1]);
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("cap warnings and argument checks") {
  KlauderOptions opt;
  opt.cap = 5;
  CHECK_FALSE(KlauderState::build(HoModel{}, 10.0, opt).warning().empty());
  CHECK_THROWS_AS(KlauderState::build(HoModel{}, -1.0), DomainError);
  CHECK_THROWS_AS(KlauderState::build(HoModel{}, std::nan("")), DomainError);
}
