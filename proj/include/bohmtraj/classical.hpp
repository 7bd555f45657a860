#pragma once

#include <optional>
#include <vector>

#include "bohmtraj/bohmian.hpp"
#include "bohmtraj/models.hpp"

namespace bohmtraj {

struct PhasePoint {
  Complex x;
  Complex p;
};

enum class FieldVariant { Real, Complex };

/// Closed-form v and Q for the HO Gaussian packet centred at `centre` at t = 0.
/// Real variant: imaginary parts are zero and z must be real.
FieldSample gaussian_fields(const HoModel& model, double centre, Complex z, double t,
                            FieldVariant variant);

/// Complexified HO flow: x(t) = x(0) cos wt + p(0)/(m w) sin wt, component-wise.
Complex ho_flow_analytic(const HoModel& model, PhasePoint start, double t);

/// Complex Bohmian path of the Gaussian packet with integration constants c1, c2:
///   (a/2 + c1) cos wt - c2 sin wt + i [c2 cos wt + (c1 - a/2) sin wt]
Complex gaussian_complex_traj(const HoModel& model, double centre, double c1, double c2, double t);

/// Momentum that makes the classical HO flow from z0 coincide with the
/// Bohmian flow of a packet centred at x_max: p_r = -m w x_i, p_i = m w (x_r - x_max).
PhasePoint init_momentum(Complex z0, double x_max, const HoModel& model);

struct ConjectureParams {
  double x0 = 0.0;
  /// HO: packet centre x_max. PT: turning point x_m = x(T/2).
  double x_max = 0.0;
  /// PT only.
  double period = 0.0;
};

struct ConjecturePoint {
  double x;
  double Q;
};

/// x(t) = x_max (cos wt - 1) + x0, with Q evaluated on that path.
ConjecturePoint conjecture_ho(const HoModel& model, const ConjectureParams& params, double t);
/// Q(x, t) = hbar w / 2 - m w^2 (x - x_max cos wt)^2 / 2
double conjecture_ho_potential(const HoModel& model, double x_max, double x, double t);

/// x(t) = a arccos[X+/2 + X-/2 cos(2 pi t / T)],  X+- = cos(x0/a) +- cos(x_m/a)
double conjecture_pt(const PtModel& model, const ConjectureParams& params, double t);
/// Poschl-Teller shaped potential in which conjecture_pt solves Newton's equation.
double conjecture_pt_potential(const PtModel& model, const ConjectureParams& params, double x);

/// Classical PT orbit of energy E, measured from the bottom of the unshifted
/// potential (V without the -(V0/2)(kappa+lambda)^2 term). Starts at the
/// turning point a arccos[(alpha - beta)/2 + sqrt(gamma)].
double pt_classical(const PtModel& model, double E, double t);
/// Period 2 pi a / sqrt(2E/m) of pt_classical.
double pt_classical_period(const PtModel& model, double E);

/// H = p^2/2m + V(x). HO adds hbar w / 2 unless include_zero_point is false.
Complex energy(const Model& model, PhasePoint point, bool include_zero_point = true);

/// Real and imaginary part of H as functions of (x_r, x_i, p_r, p_i), written
/// out component-wise (no complex arithmetic).
struct SplitEnergy {
  double re;
  double im;
};
SplitEnergy split_energy(const Model& model, PhasePoint point);

enum class FlowForm {
  /// x' = p/m, p' = -V'(x) in complex arithmetic.
  Holomorphic,
  /// Four real equations from the split H = H_r + i H_i:
  ///   x_r' = (dH_r/dp_r + dH_i/dp_i)/2,  x_i' = (dH_i/dp_r - dH_r/dp_i)/2,
  ///   p_r' = -(dH_r/dx_r + dH_i/dx_i)/2, p_i' = (dH_r/dx_i - dH_i/dx_r)/2.
  Split,
};

/// Classical flow of the complexified Hamiltonian. Trajectory::p is filled.
Trajectory complex_hamilton_flow(const Model& model, PhasePoint start,
                                 const TrajectoryOptions& opt = {},
                                 FlowForm form = FlowForm::Holomorphic);

struct StationaryOracle {
  Complex v;
  Complex Q;
  /// Closed-form x(t) from x(0) = z where one exists (HO n = 0, 1; PT n = 0).
  std::optional<Complex> x_t;
};

/// Closed forms for the complex fields of low stationary states:
/// HO n = 0, 1, 5 and PT n = 0, 1. DomainError for other n, SingularityError
/// on a zero of a denominator.
StationaryOracle stationary_oracles(const Model& model, int n, Complex z, double t);

/// Closed-form path x_n(t) from z0 at every time in `times` (ascending from 0),
/// with the branch chosen by continuity.
std::vector<Complex> closed_form_path(const Model& model, int n, Complex z0,
                                      const std::vector<double>& times);

struct Region {
  double re_lo, re_hi, im_lo, im_hi;
  int cells = 64;
};

/// HO [-4, 4]^2; PT [0.05, a pi - 0.05] x [-3, 3].
Region default_region(const Model& model);

/// Linearization of dz/dt = v~(z) at a zero. The real 2x2 Jacobian has
/// eigenvalues c and conj(c) with c = dv~/dz.
enum class FixedPointClass { Centre, Saddle, Node, Focus };

const char* to_string(FixedPointClass c);

struct FixedPoint {
  Complex z;
  FixedPointClass kind;
  /// dv~/dz at the point.
  Complex slope;
};

/// Zeros of v~_n inside the region, sorted by real then imaginary part.
std::vector<FixedPoint> fixed_points(const Model& model, int n, const Region& region);
std::vector<FixedPoint> fixed_points(const Model& model, int n);

}  // namespace bohmtraj
