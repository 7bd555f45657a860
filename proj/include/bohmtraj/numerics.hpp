#pragma once

#include <complex>
#include <functional>
#include <span>

namespace bohmtraj {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Throws DomainError when either component is NaN or infinite.
void require_finite(Complex z, const char* what);
void require_finite(double x, const char* what);

// ---------------------------------------------------------------------------
// Special functions. All accept complex arguments where the physics needs
// eigenfunctions off the real axis.

struct ValueAndDerivative {
  Complex value;
  Complex derivative;
};

/// Largest polynomial order accepted by the Hermite routines.
inline constexpr int kHermiteCap = 200;

/// Physicists' Hermite polynomial H_n(z) and H_n'(z) = 2n H_{n-1}(z).
/// Orders above 40 go through the scaled recurrence; throws
/// ScaledEvaluationError if the unscaled result is not representable.
ValueAndDerivative hermite_eval(int n, Complex z);

/// value = mantissa * exp(log_scale)
struct ScaledComplex {
  Complex mantissa;
  double log_scale = 0.0;

  Complex unscaled() const;
};

/// H_n(z) carried as mantissa and log-magnitude so that large orders and
/// arguments never overflow.
ScaledComplex hermite_scaled(int n, Complex z);

/// Normalized ratios h_k(z) = H_k(z) / sqrt(2^k k!) for k = 0..out.size()-1:
///   h_{k+1} = sqrt(2/(k+1)) z h_k - sqrt(k/(k+1)) h_{k-1}
/// Bounded growth for the |z| met by eigenfunction sums; throws
/// ScaledEvaluationError on overflow.
void hermite_normalized_ladder(Complex z, std::span<Complex> out);

/// Terminating Gauss series 2F1(-n, b; c; z) and its z-derivative.
/// Throws DomainError when c is a non-positive integer.
ValueAndDerivative hyp2f1_terminating(int n, double b, double c, Complex z);

/// Jacobi polynomials P_k^(alpha,beta)(x) for k = 0..out.size()-1 by the
/// three-term recurrence. Requires alpha, beta > -1.
void jacobi_ladder(double alpha, double beta, Complex x, std::span<Complex> out);

/// 0F1(; c; y) for c > 0, y >= 0.
double hyp0f1(double c, double y);

/// log of the Pochhammer symbol (x)_n = Gamma(x+n)/Gamma(x), x > 0.
double log_pochhammer(double x, int n);

// ---------------------------------------------------------------------------
// One-dimensional search.

struct RootOptions {
  double f_tol = 1e-12;
  double x_tol = 1e-15;
  int max_iterations = 200;
};

/// Brent root of f on [lo, hi]; requires f(lo) f(hi) <= 0, else BracketError.
double root_1d(const std::function<double(double)>& f, double lo, double hi,
               RootOptions options = {});

struct ExtremumResult {
  double argmax = 0.0;
  double value = 0.0;
  /// Function constant on the scan grid; argmax is the leftmost point.
  bool flat = false;
  /// More than one strict local maximum on the scan grid.
  bool multimodal = false;
};

struct ExtremumOptions {
  int grid_points = 2048;
  double interval_tol = 1e-10;
};

/// Coarse grid scan followed by golden-section refinement of the best cell.
ExtremumResult extremum_1d(const std::function<double(double)>& f, double lo,
                           double hi, ExtremumOptions options = {});

}  // namespace bohmtraj
