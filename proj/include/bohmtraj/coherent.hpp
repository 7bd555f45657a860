#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bohmtraj/models.hpp"

namespace bohmtraj {

/// psi and its first two x-derivatives at one (z, t).
struct WaveSample {
  Complex psi;
  Complex dpsi;
  Complex ddpsi;
};

struct KlauderOptions {
  /// Target bound on the discarded weight sum_{n > N} c_n^2.
  double tail_eps = 1e-16;
  int cap = 150;
};

/// Klauder coherent state
///   psi_J(x, t) = sum_n c_n exp(-i omega t e_n) phi_n(x),  c_n = J^{n/2} / (N(J) sqrt(rho_n)),
/// with rho_n = e_1 e_2 ... e_n. Immutable once built.
class KlauderState {
 public:
  static KlauderState build(const Model& model, double J, KlauderOptions options = {});

  const Model& model() const { return model_; }
  double J() const { return J_; }
  /// Highest retained order.
  int truncation() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  const std::vector<double>& spectral() const { return e_n_; }
  /// Closed-form N(J): HO exp(J/2), PT sqrt(0F1(1+kappa+lambda; J)).
  double norm() const { return norm_; }
  double omega() const { return omega_; }
  /// Ratio-test bound on the discarded weight.
  double tail_bound() const { return tail_bound_; }
  /// Non-empty when the cap was hit before tail_eps, or the N vs N+10
  /// stability check disagreed beyond 1e-6.
  const std::string& warning() const { return warning_; }

  WaveSample evaluate(Complex z, double t) const;
  /// As evaluate, using only orders 0..n_max (coefficients not renormalized).
  WaveSample evaluate_truncated(Complex z, double t, int n_max) const;

 private:
  Model model_;
  double J_ = 0.0;
  std::vector<double> coeffs_;
  std::vector<double> e_n_;
  double norm_ = 1.0;
  double omega_ = 1.0;
  double tail_bound_ = 0.0;
  std::string warning_;
};

/// Q = Var(n)/<n> - 1. HO: 0. PT: closed form in 0F1 ratios; 0 at J = 0.
double mandel_q(const Model& model, double J);

/// sum n c_n^2
double mean_occupation(const KlauderState& state);
/// J d ln N^2 / dJ in closed form.
double mean_occupation_formula(const Model& model, double J);
/// sum n^2 c_n^2 - (sum n c_n^2)^2
double occupation_variance(const KlauderState& state);

struct PeakResult {
  double position = 0.0;
  double magnitude = 0.0;
  bool multimodal = false;
};

/// argmax of |psi_J(x, 0)| on the real axis.
PeakResult peak_position(const KlauderState& state);

/// Real interval carrying the state: HO +-(sqrt(2J) + 8) ell, PT [0, a pi].
std::pair<double, double> support(const KlauderState& state);

struct MomentReport {
  double norm = 0.0;
  double mean_x = 0.0;
  double var_x = 0.0;
  double mean_p = 0.0;
  double var_p = 0.0;
  /// <p^2> from hbar^2 int |psi_x|^2, for comparison with -hbar^2 int psi* psi_xx.
  double mean_p2_gradient = 0.0;
  double mean_p2 = 0.0;
  /// dx dp / hbar
  double uncertainty_product = 0.0;
  double mean_H = 0.0;
};

/// Moments of |psi_J(., t)|^2, normalized by the computed norm.
MomentReport moments(const KlauderState& state, double t, double tol = 1e-11);

struct DensityPoint {
  double x;
  double density;
};

std::vector<DensityPoint> density_snapshot(const KlauderState& state,
                                           const std::vector<double>& grid, double t);

}  // namespace bohmtraj
