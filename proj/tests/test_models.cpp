#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "bohmtraj/error.hpp"
#include "bohmtraj/models.hpp"
#include "bohmtraj/quadrature.hpp"
#include "support/generators.hpp"

using namespace bohmtraj;

namespace {

double overlap(const Model& model, int m, int n, double lo, double hi) {
  QuadratureOptions opt;
  opt.abs_tol = 1e-13;
  opt.rel_tol = 1e-12;
  opt.initial_segments = 64;
  return integrate([&](double x) { return (std::conj(eigen(model, m, x).phi) * eigen(model, n, x).phi).real(); },
                   lo, hi, opt)
      .value;
}

// -hbar^2/2m phi'' + V phi - E phi, relative to the largest term
double schrodinger_residual(const Model& model, int n, Complex z) {
  const EigenData e = eigen(model, n, z);
  const double hb = hbar(model), m = mass(model);
  const Complex kinetic = -hb * hb / (2 * m) * e.ddphi;
  const Complex pot = potential(model, z) * e.phi;
  const Complex res = kinetic + pot - e.energy * e.phi;
  return std::abs(res) / std::max({std::abs(kinetic), std::abs(pot), std::abs(e.energy * e.phi), 1e-300});
}

const PtModel kNarrow{1.0, 2.0, 90.0, 100.0, 1.0};
const PtModel kBroad{};

}  // namespace

TEST_CASE("HO eigenfunctions are orthonormal") {
  const HoModel ho;
  for (int n : {0, 1, 5, 30, 45, 60}) {
    const double w = std::sqrt(2.0 * n + 1) + 12;
    CHECK(overlap(ho, n, n, -w, w) == doctest::Approx(1.0).epsilon(1e-11));
  }
  CHECK(std::abs(overlap(ho, 2, 5, -12, 12)) < 1e-12);
  CHECK(std::abs(overlap(ho, 3, 41, -15, 15)) < 1e-11);
}

TEST_CASE("HO with non-unit parameters keeps unit norm and spectrum") {
  const HoModel ho{2.0, 0.5, 0.7};
  const double ell = std::sqrt(ho.hbar / (ho.mass * ho.omega));
  CHECK(overlap(ho, 4, 4, -12 * ell, 12 * ell) == doctest::Approx(1.0).epsilon(1e-11));
  CHECK(energy_level(ho, 3) == doctest::Approx(ho.hbar * ho.omega * 3.5));
}

TEST_CASE("PT eigenfunctions are orthonormal up to the order cap") {
  for (const PtModel& pt : {kBroad, kNarrow}) {
    for (int n : {0, 1, 3, 20, 60, kPtOrderCap}) {
      CHECK(overlap(pt, n, n, 0.0, pt.width()) == doctest::Approx(1.0).epsilon(1e-10));
    }
    CHECK(std::abs(overlap(pt, 1, 4, 0.0, pt.width())) < 1e-12);
  }
  CHECK(pt_norm(kBroad, 3) == doctest::Approx(std::exp(pt_log_norm(kBroad, 3))).epsilon(1e-13));
  CHECK_THROWS_AS(pt_eigen(kBroad, kPtOrderCap + 1, 1.0), DomainError);
}

TEST_CASE("eigenfunctions solve the Schrodinger equation off the real axis") {
  gen::Source src(3);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = src.integer(0, 12);
    CHECK(schrodinger_residual(HoModel{}, n, src.complex(-3, 3, -1.5, 1.5)) < 1e-9);
    CHECK(schrodinger_residual(kBroad, n, src.complex(0.4, 5.8, -1.0, 1.0)) < 1e-9);
    CHECK(schrodinger_residual(kNarrow, n, src.complex(2.2, 4.0, -0.3, 0.3)) < 1e-9);
  }
}

TEST_CASE("derivatives agree with central differences") {
  gen::Source src(8);
  const double h = 1e-5;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = src.integer(0, 8);
    for (const Model& model : {Model(HoModel{}), Model(kBroad)}) {
      const Complex z = std::holds_alternative<HoModel>(model) ? src.complex(-2, 2, -1, 1) : src.complex(1, 5, -0.5, 0.5);
      const EigenData e = eigen(model, n, z);
      const EigenData ep = eigen(model, n, z + h), em = eigen(model, n, z - h);
      CHECK(gen::rel_err(e.dphi, (ep.phi - em.phi) / (2 * h)) < 1e-7);
      CHECK(gen::rel_err(e.ddphi, (ep.dphi - em.dphi) / (2 * h)) < 1e-7);
    }
  }
}

TEST_CASE("Schwarz reflection: phi(conj z) = conj phi(z)") {
  gen::Source src(21);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = src.integer(0, 10);
    const Complex z = src.complex(0.5, 5.5, -1, 1);
    CHECK(gen::rel_err(eigen(kBroad, n, std::conj(z)).phi, std::conj(eigen(kBroad, n, z).phi)) < 1e-13);
    CHECK(gen::rel_err(eigen(HoModel{}, n, std::conj(z)).phi, std::conj(eigen(HoModel{}, n, z).phi)) < 1e-13);
  }
}

TEST_CASE("HO large orders go through the scaled path consistently") {
  const HoModel ho;
  for (double x : {-3.0, 0.4, 7.5}) {
    const EigenData below = ho_eigen(ho, 40, x), above = ho_eigen(ho, 41, x);
    // the ladder relation x phi_n = sqrt(n/2) phi_{n-1} + sqrt((n+1)/2) phi_{n+1}
    const Complex lhs = x * below.phi;
    const Complex rhs = std::sqrt(20.0) * ho_eigen(ho, 39, x).phi + std::sqrt(20.5) * above.phi;
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }
}

TEST_CASE("PT spectrum and frequency") {
  const PtModel pt{1.5, 1.3, 4.0, 7.0, 0.9};
  const double omega = pt.hbar / (2 * pt.mass * pt.a * pt.a);
  CHECK(pt.omega() == doctest::Approx(omega));
  for (int n : {0, 1, 6}) {
    CHECK(energy_level(pt, n) == doctest::Approx(pt.hbar * omega * n * (n + pt.kappa + pt.lambda)));
    CHECK(spectral_value(pt, n) == doctest::Approx(n * (n + pt.kappa + pt.lambda)));
  }
}

TEST_CASE("PT potential shape and poles") {
  const Complex z(1.2, 0.3);
  const double v0 = kBroad.v0();
  const Complex u = z / (2 * kBroad.a);
  const Complex ref = 0.5 * v0 *
                          (kBroad.lambda * (kBroad.lambda - 1) / (std::cos(u) * std::cos(u)) +
                           kBroad.kappa * (kBroad.kappa - 1) / (std::sin(u) * std::sin(u))) -
                      0.5 * v0 * std::pow(kBroad.kappa + kBroad.lambda, 2);
  CHECK(gen::rel_err(potential(kBroad, z), ref) < 1e-14);
  const double h = 1e-6;
  CHECK(gen::rel_err(potential_derivative(kBroad, z), (potential(kBroad, z + h) - potential(kBroad, z - h)) / (2 * h)) < 1e-8);
  CHECK_THROWS_AS(pt_eigen(kBroad, 2, 0.0), SingularityError);
  CHECK_THROWS_AS(pt_eigen(kBroad, 2, kBroad.width()), SingularityError);
  CHECK_THROWS_AS(potential(kBroad, 0.0), SingularityError);
}

TEST_CASE("validate rejects non-physical parameters") {
  CHECK_THROWS_AS(validate(HoModel{-1.0, 1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(validate(HoModel{1.0, 0.0, 1.0}), DomainError);
  CHECK_THROWS_AS(validate(PtModel{1.0, 2.0, 1.0, 3.0, 1.0}), DomainError);
  CHECK_THROWS_AS(validate(PtModel{1.0, -2.0, 2.0, 3.0, 1.0}), DomainError);
  CHECK_NOTHROW(validate(kNarrow));
  CHECK(model_name(HoModel{}) == "ho");
  CHECK(model_name(kBroad) == "pt");
}
