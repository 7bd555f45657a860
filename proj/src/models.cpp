#include "bohmtraj/models.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "bohmtraj/error.hpp"

namespace bohmtraj {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double ho_length(const HoModel& m) { return std::sqrt(m.hbar / (m.mass * m.omega)); }

void check_pt_order(int n) {
  if (n < 0 || n > kPtOrderCap) {
    throw DomainError("Poschl-Teller order " + std::to_string(n) + " outside [0, " +
                      std::to_string(kPtOrderCap) + "]");
  }
}

// Shared trigonometric factors of the PT eigenfunctions at one position.
// The polynomial part 2F1(-n, n+kappa+lambda; kappa+1/2; sin^2(z/2a)) is
// carried as n!/(kappa+1/2)_n P_n^(kappa-1/2, lambda-1/2)(cos(z/a)); the
// Jacobi recurrence stays accurate where the power series cancels.
struct PtFrame {
  Complex log_prefactor;  // lambda log cos + kappa log sin
  Complex g;              // (cos^lambda sin^kappa)' / (cos^lambda sin^kappa)
  Complex g_prime;
  Complex x, dx, ddx;     // x = cos(z/a) and its z-derivatives
};

PtFrame pt_frame(const PtModel& m, Complex z) {
  require_finite(z, "position");
  const Complex u = z / (2.0 * m.a);
  const Complex s = std::sin(u);
  const Complex c = std::cos(u);
  constexpr double kPoleGuard = 1e-14;
  if (std::abs(s) < kPoleGuard || std::abs(c) < kPoleGuard) {
    throw SingularityError("Poschl-Teller eigenfunction evaluated at a pole (z = " +
                           std::to_string(z.real()) + (z.imag() < 0 ? "" : "+") +
                           std::to_string(z.imag()) + "i)");
  }
  PtFrame f;
  f.log_prefactor = m.lambda * std::log(c) + m.kappa * std::log(s);
  const double inv2a = 1.0 / (2.0 * m.a);
  f.g = inv2a * (m.kappa * c / s - m.lambda * s / c);
  f.g_prime = -inv2a * inv2a * (m.kappa / (s * s) + m.lambda / (c * c));
  f.x = c * c - s * s;
  f.dx = -2.0 * s * c / m.a;
  f.ddx = -f.x / (m.a * m.a);
  return f;
}

// Fills out[0..n_max] from one frame.
void pt_fill(const PtModel& m, const PtFrame& f, std::span<EigenData> out) {
  const int n_max = static_cast<int>(out.size()) - 1;
  check_pt_order(n_max);
  const double alpha = m.kappa - 0.5;
  const double beta = m.lambda - 0.5;
  const double ab1 = alpha + beta + 1.0;
  std::vector<Complex> p0(n_max + 1), p1(std::max(n_max, 1)), p2(std::max(n_max - 1, 1));
  jacobi_ladder(alpha, beta, f.x, p0);
  jacobi_ladder(alpha + 1.0, beta + 1.0, f.x, p1);
  jacobi_ladder(alpha + 2.0, beta + 2.0, f.x, p2);
  for (int n = 0; n <= n_max; ++n) {
    const Complex P = p0[n];
    const Complex dP = n >= 1 ? 0.5 * (n + ab1) * p1[n - 1] : Complex{};
    const Complex ddP = n >= 2 ? 0.25 * (n + ab1) * (n + ab1 + 1.0) * p2[n - 2] : Complex{};
    const double log_c = std::lgamma(n + 1.0) - log_pochhammer(m.kappa + 0.5, n) -
                         0.5 * pt_log_norm(m, n);
    const Complex scale = std::exp(f.log_prefactor + log_c);
    const Complex dG = dP * f.dx;
    const Complex ddG = ddP * f.dx * f.dx + dP * f.ddx;
    EigenData& e = out[n];
    e.phi = scale * P;
    e.dphi = scale * (f.g * P + dG);
    e.ddphi = scale * ((f.g_prime + f.g * f.g) * P + 2.0 * f.g * dG + ddG);
    e.e_n = n * (n + m.kappa + m.lambda);
    e.energy = m.hbar * m.omega() * e.e_n;
  }
}

}  // namespace

void validate(const Model& model) {
  std::visit(overloaded{
                 [](const HoModel& m) {
                   if (!(m.mass > 0 && m.omega > 0 && m.hbar > 0)) {
                     throw DomainError("harmonic oscillator parameters must be positive");
                   }
                 },
                 [](const PtModel& m) {
                   if (!(m.mass > 0 && m.a > 0 && m.hbar > 0)) {
                     throw DomainError("Poschl-Teller m, a, hbar must be positive");
                   }
                   if (!(m.kappa > 1 && m.lambda > 1)) {
                     throw DomainError("Poschl-Teller couplings must satisfy kappa, lambda > 1");
                   }
                 }},
             model);
}

EigenData ho_eigen(const HoModel& m, int n, Complex z) {
  if (n < 0 || n > kHermiteCap) throw DomainError("HO eigenfunction order out of range");
  require_finite(z, "position");
  const double ell = ho_length(m);
  const Complex xi = z / ell;
  const double log_norm0 = -0.25 * std::log(kPi * ell * ell);
  EigenData out;
  out.e_n = n;
  out.energy = m.hbar * m.omega * (n + 0.5);
  Complex hn, hn1;
  if (n <= 40) {
    std::vector<Complex> ladder(n + 1);
    hermite_normalized_ladder(xi, ladder);
    const Complex g = std::exp(log_norm0 - 0.5 * xi * xi);
    hn = g * ladder[n];
    hn1 = n > 0 ? g * ladder[n - 1] : Complex{};
  } else {
    // log-scaled path: exp(-xi^2/2) H_n / sqrt(2^n n!) without forming H_n
    auto scaled = [&](int k) {
      ScaledComplex h = hermite_scaled(k, xi);
      double log_hnorm = 0.5 * (k * std::log(2.0) + std::lgamma(k + 1.0));
      return h.mantissa * std::exp(log_norm0 - 0.5 * xi * xi + (h.log_scale - log_hnorm));
    };
    hn = scaled(n);
    hn1 = scaled(n - 1);
  }
  out.phi = hn;
  out.dphi = (-xi * hn + std::sqrt(2.0 * n) * hn1) / ell;
  out.ddphi = (xi * xi - (2.0 * n + 1.0)) * hn / (ell * ell);
  return out;
}

EigenData pt_eigen(const PtModel& m, int n, Complex z) {
  check_pt_order(n);
  std::vector<EigenData> ladder(n + 1);
  pt_fill(m, pt_frame(m, z), ladder);
  return ladder[n];
}

EigenData eigen(const Model& model, int n, Complex z) {
  return std::visit(overloaded{[&](const HoModel& m) { return ho_eigen(m, n, z); },
                               [&](const PtModel& m) { return pt_eigen(m, n, z); }},
                    model);
}

void eigen_ladder(const Model& model, Complex z, std::span<EigenData> out) {
  if (out.empty()) return;
  const int n_max = static_cast<int>(out.size()) - 1;
  std::visit(overloaded{
                 [&](const HoModel& m) {
                   if (n_max > kHermiteCap) throw DomainError("HO ladder exceeds order cap");
                   require_finite(z, "position");
                   const double ell = ho_length(m);
                   const Complex xi = z / ell;
                   std::vector<Complex> h(n_max + 1);
                   hermite_normalized_ladder(xi, h);
                   const Complex g = std::exp(-0.25 * std::log(kPi * ell * ell) - 0.5 * xi * xi);
                   for (int n = 0; n <= n_max; ++n) {
                     EigenData& e = out[n];
                     const Complex hn = g * h[n];
                     const Complex hn1 = n > 0 ? g * h[n - 1] : Complex{};
                     e.phi = hn;
                     e.dphi = (-xi * hn + std::sqrt(2.0 * n) * hn1) / ell;
                     e.ddphi = (xi * xi - (2.0 * n + 1.0)) * hn / (ell * ell);
                     e.e_n = n;
                     e.energy = m.hbar * m.omega * (n + 0.5);
                   }
                 },
                 [&](const PtModel& m) {
                   check_pt_order(n_max);
                   pt_fill(m, pt_frame(m, z), out);
                 }},
             model);
}

double pt_log_norm(const PtModel& m, int n) {
  if (n < 0) throw DomainError("pt_norm requires n >= 0");
  const double s = m.kappa + m.lambda;
  double log_n = std::log(m.a) + n * std::log(2.0) + std::lgamma(n + 1.0) +
                 std::lgamma(m.kappa + 0.5) + std::lgamma(n + m.lambda + 0.5) -
                 std::lgamma(2.0 * n + 1.0 + s);
  for (int l = 1; l <= n; ++l) {
    log_n += std::log(n - 1.0 + l + s) - std::log(2.0 * l - 1.0 + 2.0 * m.kappa);
  }
  return log_n;
}

double pt_norm(const PtModel& m, int n) { return std::exp(pt_log_norm(m, n)); }

Complex potential(const Model& model, Complex z) {
  require_finite(z, "position");
  return std::visit(
      overloaded{[&](const HoModel& m) { return 0.5 * m.mass * m.omega * m.omega * z * z; },
                 [&](const PtModel& m) {
                   const Complex u = z / (2.0 * m.a);
                   const Complex s = std::sin(u), c = std::cos(u);
                   if (std::abs(s) < 1e-14 || std::abs(c) < 1e-14) {
                     throw SingularityError("Poschl-Teller potential evaluated at a pole");
                   }
                   const double v0 = m.v0();
                   return 0.5 * v0 *
                              (m.lambda * (m.lambda - 1.0) / (c * c) +
                               m.kappa * (m.kappa - 1.0) / (s * s)) -
                          Complex(0.5 * v0 * (m.lambda + m.kappa) * (m.lambda + m.kappa));
                 }},
      model);
}

Complex potential_derivative(const Model& model, Complex z) {
  require_finite(z, "position");
  return std::visit(overloaded{[&](const HoModel& m) { return m.mass * m.omega * m.omega * z; },
                               [&](const PtModel& m) {
                                 const Complex u = z / (2.0 * m.a);
                                 const Complex s = std::sin(u), c = std::cos(u);
                                 if (std::abs(s) < 1e-14 || std::abs(c) < 1e-14) {
                                   throw SingularityError(
                                       "Poschl-Teller force evaluated at a pole");
                                 }
                                 return m.v0() / (2.0 * m.a) *
                                        (m.lambda * (m.lambda - 1.0) * s / (c * c * c) -
                                         m.kappa * (m.kappa - 1.0) * c / (s * s * s));
                               }},
                    model);
}

double model_omega(const Model& model) {
  return std::visit(overloaded{[](const HoModel& m) { return m.omega; },
                               [](const PtModel& m) { return m.omega(); }},
                    model);
}

double spectral_value(const Model& model, int n) {
  return std::visit(
      overloaded{[n](const HoModel&) { return double(n); },
                 [n](const PtModel& m) { return n * (n + m.kappa + m.lambda); }},
      model);
}

double energy_level(const Model& model, int n) {
  return std::visit(
      overloaded{[n](const HoModel& m) { return m.hbar * m.omega * (n + 0.5); },
                 [n](const PtModel& m) { return m.hbar * m.omega() * n * (n + m.kappa + m.lambda); }},
      model);
}

double mass(const Model& model) {
  return std::visit([](const auto& m) { return m.mass; }, model);
}

double hbar(const Model& model) {
  return std::visit([](const auto& m) { return m.hbar; }, model);
}

double length_scale(const Model& model) {
  return std::visit(overloaded{[](const HoModel& m) { return ho_length(m); },
                               [](const PtModel& m) { return m.a; }},
                    model);
}

std::string model_name(const Model& model) {
  return std::holds_alternative<HoModel>(model) ? "ho" : "pt";
}

}  // namespace bohmtraj
