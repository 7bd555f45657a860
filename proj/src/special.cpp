#include <cmath>
#include <string>
#include <vector>

#include "bohmtraj/error.hpp"
#include "bohmtraj/numerics.hpp"

namespace bohmtraj {

void require_finite(Complex z, const char* what) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw DomainError(std::string(what) + " must be finite");
  }
}

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw DomainError(std::string(what) + " must be finite");
}

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void check_order(int n) {
  if (n < 0 || n > kHermiteCap) {
    throw DomainError("Hermite order " + std::to_string(n) + " outside [0, " +
                      std::to_string(kHermiteCap) + "]");
  }
}

// log sqrt(2^n n!)
double log_hermite_norm(int n) {
  return 0.5 * (n * std::log(2.0) + std::lgamma(n + 1.0));
}

}  // namespace

Complex ScaledComplex::unscaled() const {
  if (mantissa == Complex{}) return {};
  Complex value = mantissa * std::exp(log_scale);
  if (!finite(value)) {
    throw ScaledEvaluationError(
        "scaled value not representable; use the log-scaled eigenfunction path");
  }
  return value;
}

ScaledComplex hermite_scaled(int n, Complex z) {
  check_order(n);
  require_finite(z, "Hermite argument");
  constexpr double kRescale = 1e150;
  Complex prev{0.0, 0.0};
  Complex cur{1.0, 0.0};
  double log_scale = 0.0;
  for (int k = 0; k < n; ++k) {
    Complex next = std::sqrt(2.0 / (k + 1)) * z * cur - std::sqrt(double(k) / (k + 1)) * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > kRescale) {
      cur /= kRescale;
      prev /= kRescale;
      log_scale += std::log(kRescale);
    }
  }
  return {cur, log_scale + log_hermite_norm(n)};
}

ValueAndDerivative hermite_eval(int n, Complex z) {
  check_order(n);
  require_finite(z, "Hermite argument");
  if (n == 0) return {{1.0, 0.0}, {0.0, 0.0}};
  if (n <= 40) {
    Complex h0{1.0, 0.0};
    Complex h1 = 2.0 * z;
    for (int k = 1; k < n; ++k) {
      Complex h2 = 2.0 * z * h1 - 2.0 * double(k) * h0;
      h0 = h1;
      h1 = h2;
    }
    if (!finite(h1) || !finite(h0)) {
      throw ScaledEvaluationError("Hermite H_" + std::to_string(n) +
                                  " overflows; use the log-scaled eigenfunction path");
    }
    return {h1, 2.0 * n * h0};
  }
  Complex value = hermite_scaled(n, z).unscaled();
  Complex lower = hermite_scaled(n - 1, z).unscaled();
  return {value, 2.0 * n * lower};
}

void hermite_normalized_ladder(Complex z, std::span<Complex> out) {
  require_finite(z, "Hermite argument");
  if (out.empty()) return;
  if (static_cast<int>(out.size()) > kHermiteCap + 1) check_order(static_cast<int>(out.size()) - 1);
  out[0] = 1.0;
  if (out.size() == 1) return;
  out[1] = std::sqrt(2.0) * z;
  for (std::size_t k = 1; k + 1 < out.size(); ++k) {
    double kk = static_cast<double>(k);
    out[k + 1] = std::sqrt(2.0 / (kk + 1)) * z * out[k] - std::sqrt(kk / (kk + 1)) * out[k - 1];
  }
  if (!finite(out.back())) {
    throw ScaledEvaluationError("normalized Hermite ladder overflows at |z| = " +
                                std::to_string(std::abs(z)));
  }
}

ValueAndDerivative hyp2f1_terminating(int n, double b, double c, Complex z) {
  if (n < 0) throw DomainError("2F1 termination order must be non-negative");
  if (c <= 0.0 && c == std::round(c)) {
    throw DomainError("2F1 lower parameter c = " + std::to_string(c) +
                      " is a non-positive integer");
  }
  require_finite(z, "2F1 argument");
  auto series = [z](int order, double bb, double cc) {
    Complex sum{1.0, 0.0};
    Complex term{1.0, 0.0};
    for (int k = 0; k < order; ++k) {
      term *= (double(k - order) * (bb + k)) / ((cc + k) * (k + 1.0)) * z;
      sum += term;
    }
    return sum;
  };
  Complex value = series(n, b, c);
  Complex derivative{0.0, 0.0};
  if (n > 0) derivative = (-double(n) * b / c) * series(n - 1, b + 1.0, c + 1.0);
  return {value, derivative};
}

double hyp0f1(double c, double y) {
  if (!(c > 0.0)) throw DomainError("0F1 requires c > 0");
  if (!(y >= 0.0)) throw DomainError("0F1 requires y >= 0");
  double sum = 1.0;
  double term = 1.0;
  for (int k = 0; k < 100000; ++k) {
    term *= y / ((c + k) * (k + 1.0));
    sum += term;
    if (term < 1e-16 * sum) break;
  }
  return sum;
}

double log_pochhammer(double x, int n) {
  if (!(x > 0.0)) throw DomainError("log_pochhammer requires x > 0");
  return std::lgamma(x + n) - std::lgamma(x);
}

}  // namespace bohmtraj

namespace bohmtraj {

void jacobi_ladder(double alpha, double beta, Complex x, std::span<Complex> out) {
  if (!(alpha > -1.0) || !(beta > -1.0)) throw DomainError("jacobi_ladder needs alpha, beta > -1");
  require_finite(x, "jacobi argument");
  if (out.empty()) return;
  out[0] = 1.0;
  if (out.size() == 1) return;
  const double ab = alpha + beta;
  out[1] = (alpha + 1.0) + 0.5 * (ab + 2.0) * (x - 1.0);
  for (std::size_t k = 2; k < out.size(); ++k) {
    const double n = static_cast<double>(k);
    const double s = 2.0 * n + ab;
    const double lead = 2.0 * n * (n + ab) * (s - 2.0);
    const Complex mid = (s - 1.0) * (s * (s - 2.0) * x + (alpha * alpha - beta * beta));
    const double back = 2.0 * (n + alpha - 1.0) * (n + beta - 1.0) * s;
    out[k] = (mid * out[k - 1] - back * out[k - 2]) / lead;
  }
}

}  // namespace bohmtraj
