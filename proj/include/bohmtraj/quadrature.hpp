#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <string>
#include <tuple>
#include <type_traits>
#include <utility>
#include <vector>

#include "bohmtraj/error.hpp"
#include "bohmtraj/numerics.hpp"

namespace bohmtraj {

/// Fixed-size bundle of real integrands evaluated together.
template <std::size_t N>
struct Bundle {
  std::array<double, N> v{};

  double& operator[](std::size_t i) { return v[i]; }
  double operator[](std::size_t i) const { return v[i]; }

  Bundle& operator+=(const Bundle& o) {
    for (std::size_t i = 0; i < N; ++i) v[i] += o.v[i];
    return *this;
  }
  friend Bundle operator+(Bundle a, const Bundle& b) { return a += b; }
  friend Bundle operator-(Bundle a, const Bundle& b) {
    for (std::size_t i = 0; i < N; ++i) a.v[i] -= b.v[i];
    return a;
  }
  friend Bundle operator*(double s, Bundle a) {
    for (auto& x : a.v) x *= s;
    return a;
  }
};

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(Complex z) { return std::abs(z); }
template <std::size_t N>
double magnitude(const Bundle<N>& b) {
  double m = 0.0;
  for (double x : b.v) m = std::max(m, std::abs(x));
  return m;
}

struct QuadratureOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  /// Uniform pre-split of [a, b]; helps narrow peaks get noticed.
  int initial_segments = 8;
  int max_segments = 4000;
};

template <class R>
struct QuadratureResult {
  R value{};
  double error = 0.0;
  int evaluations = 0;
  bool converged = false;
};

namespace detail {

// Gauss-Kronrod 7/15 nodes on [-1, 1] (positive half, centre last).
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5) and the centre.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class R>
struct Segment {
  double a, b;
  R value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F, class R>
Segment<R> gk15(F& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  R fc = f(centre);
  R kronrod = kKronrodWeights[7] * fc;
  R gauss = kGaussWeights[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    R f1 = f(centre - dx);
    R f2 = f(centre + dx);
    R sum = f1 + f2;
    kronrod += kKronrodWeights[j] * sum;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * sum;
  }
  R value = half * kronrod;
  double err = magnitude(half * (kronrod - gauss));
  return {a, b, value, err};
}

}  // namespace detail

/// Adaptive Gauss-Kronrod (7/15) integration of f over [a, b]. Always returns
/// the best estimate; `converged` reports whether the tolerance was met.
template <class F>
auto integrate_partial(F f, double a, double b, QuadratureOptions opt = {})
    -> QuadratureResult<std::decay_t<decltype(f(a))>> {
  using R = std::decay_t<decltype(f(a))>;
  if (!(a < b)) throw DomainError("quadrature requires a < b");
  std::priority_queue<detail::Segment<R>> heap;
  QuadratureResult<R> result;
  const int segments = std::max(1, opt.initial_segments);
  for (int i = 0; i < segments; ++i) {
    double lo = a + (b - a) * i / segments;
    double hi = i + 1 == segments ? b : a + (b - a) * (i + 1) / segments;
    heap.push(detail::gk15<F, R>(f, lo, hi));
    result.evaluations += 15;
  }
  auto totals = [&heap]() {
    auto copy = heap;
    R value{};
    double err = 0.0;
    while (!copy.empty()) {
      value += copy.top().value;
      err += copy.top().error;
      copy.pop();
    }
    return std::pair{value, err};
  };
  auto [value, err] = totals();
  while (err > std::max(opt.abs_tol, opt.rel_tol * magnitude(value)) &&
         static_cast<int>(heap.size()) < opt.max_segments) {
    auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    auto left = detail::gk15<F, R>(f, worst.a, mid);
    auto right = detail::gk15<F, R>(f, mid, worst.b);
    result.evaluations += 30;
    value += (left.value + right.value) - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    if (heap.size() % 64 == 0) std::tie(value, err) = totals();  // limit drift
  }
  std::tie(value, err) = totals();
  result.value = value;
  result.error = err;
  result.converged = err <= std::max(opt.abs_tol, opt.rel_tol * magnitude(value));
  return result;
}

/// As integrate_partial, but throws ConvergenceError (carrying the partial
/// estimate's magnitude) when the tolerance is not met.
template <class F>
auto integrate(F f, double a, double b, QuadratureOptions opt = {}) {
  auto r = integrate_partial(std::move(f), a, b, opt);
  if (!r.converged) {
    throw ConvergenceError("quadrature did not converge on [" + std::to_string(a) + ", " +
                               std::to_string(b) + "]",
                           magnitude(r.value), r.error);
  }
  return r;
}

/// Scalar convenience form: value of the integral to tolerance tol.
template <class F>
auto quadrature(F f, double a, double b, double tol) {
  QuadratureOptions opt;
  opt.abs_tol = tol;
  opt.rel_tol = tol;
  return integrate(std::move(f), a, b, opt).value;
}

}  // namespace bohmtraj
