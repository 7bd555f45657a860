#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "bohmtraj/numerics.hpp"

namespace bohmtraj {

/// H = p^2/2m + m omega^2 x^2 / 2
struct HoModel {
  double mass = 1.0;
  double omega = 1.0;
  double hbar = 1.0;

  bool operator==(const HoModel&) const = default;
};

/// Trigonometric Poschl-Teller well on [0, a pi]:
///   V = (V0/2) [lambda(lambda-1)/cos^2(x/2a) + kappa(kappa-1)/sin^2(x/2a)] - (V0/2)(lambda+kappa)^2
/// with V0 = hbar^2 / (4 m a^2). The shift puts the ground state at E_0 = 0.
struct PtModel {
  double mass = 1.0;
  double a = 2.0;
  double kappa = 2.0;
  double lambda = 3.0;
  double hbar = 1.0;

  double v0() const { return hbar * hbar / (4.0 * mass * a * a); }
  /// Spectral frequency: E_n = hbar * omega * n (n + kappa + lambda).
  double omega() const { return hbar / (2.0 * mass * a * a); }
  double width() const { return a * kPi; }

  bool operator==(const PtModel&) const = default;
};

using Model = std::variant<HoModel, PtModel>;

/// Throws DomainError for non-positive parameters or PT couplings <= 1.
void validate(const Model& model);

/// Eigenfunction value and first two x-derivatives at a complex position.
struct EigenData {
  Complex phi;
  Complex dphi;
  Complex ddphi;
  double e_n = 0.0;     // dimensionless spectral value, E_n = hbar omega e_n (+ zero point for HO)
  double energy = 0.0;  // eigenvalue of H
};

inline constexpr int kPtOrderCap = 100;

EigenData ho_eigen(const HoModel& model, int n, Complex z);
EigenData pt_eigen(const PtModel& model, int n, Complex z);
EigenData eigen(const Model& model, int n, Complex z);

/// Fills out[n] for n = 0..out.size()-1 at one position. Cheaper than
/// repeated eigen() calls because the shared factors are computed once.
void eigen_ladder(const Model& model, Complex z, std::span<EigenData> out);

/// Normalization N_n of the PT eigenfunction, so that phi_n = psi_n / sqrt(N_n).
double pt_norm(const PtModel& model, int n);
double pt_log_norm(const PtModel& model, int n);

/// Analytic continuation of V to complex z. PT throws SingularityError at a pole.
Complex potential(const Model& model, Complex z);
Complex potential_derivative(const Model& model, Complex z);

/// omega in the Klauder phase exp(-i omega t e_n).
double model_omega(const Model& model);
/// e_n: HO n, PT n(n + kappa + lambda).
double spectral_value(const Model& model, int n);
/// Eigenvalue E_n of the Hamiltonian (HO includes hbar omega / 2).
double energy_level(const Model& model, int n);

double mass(const Model& model);
double hbar(const Model& model);
/// Natural length: HO sqrt(hbar / m omega), PT a.
double length_scale(const Model& model);

/// "ho" or "pt"
std::string model_name(const Model& model);

}  // namespace bohmtraj
