#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bohmtraj/coherent.hpp"
#include "bohmtraj/models.hpp"
#include "bohmtraj/ode.hpp"

namespace bohmtraj {

/// A wavefunction psi(z, t) with its first two z-derivatives.
struct WaveSampler {
  std::function<WaveSample(Complex z, double t)> eval;
  /// "stationary n=3", "klauder J=2", "gaussian a=1.5"
  std::string tag;
  double mass = 1.0;
  double hbar = 1.0;
  double length_scale = 1.0;
  /// Needed by newton_effective and the PT domain guard.
  std::optional<Model> model;
};

/// phi_n(z) exp(-i E_n t / hbar)
WaveSampler stationary_sampler(const Model& model, int n);
WaveSampler klauder_sampler(std::shared_ptr<const KlauderState> state);
WaveSampler klauder_sampler(const KlauderState& state);
/// HO Gaussian packet of minimal width centred at x = centre at t = 0.
WaveSampler gaussian_sampler(const HoModel& model, double centre);

struct RealFields {
  double v = 0.0;
  double Q = 0.0;
};

struct ComplexFields {
  Complex v;
  Complex Q;
};

/// m v = hbar Im(psi* psi_x) / |psi|^2 and the quantum potential
/// Q = -(hbar^2 / 2m) R''/R with R = |psi|. Throws NodeError at a node.
RealFields fields_real(const WaveSampler& sampler, double x, double t);

/// m v = (hbar / i) psi_x / psi,  Q = -(hbar^2 / 2m) (psi_xx/psi - psi_x^2/psi^2).
ComplexFields fields_complex(const WaveSampler& sampler, Complex z, double t);

struct TrajectoryOptions {
  double t0 = 0.0;
  double t1 = 1.0;
  int samples = 1001;
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double max_step = 0.0;
};

struct TrajectoryMetadata {
  std::string model;
  std::string sampler;
  std::string variant;
  double rel_tol = 0.0;
  double abs_tol = 0.0;
  Complex x0;
  std::optional<Complex> p0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Complex> x;
  /// Momentum when the integrated system carries one.
  std::vector<Complex> p;
  TrajectoryMetadata metadata;
  OdeStatus status = OdeStatus::Completed;
  std::string diagnostic;

  bool completed() const { return status == OdeStatus::Completed; }
};

/// dx/dt = v(x, t) on the real axis. PT paths are kept inside
/// [delta, a pi - delta] with delta = 1e-8 a; leaving it ends the path.
Trajectory trajectory_real(const WaveSampler& sampler, double x0, const TrajectoryOptions& opt = {});

/// dz/dt = v~(z, t) on the complex plane.
Trajectory trajectory_complex(const WaveSampler& sampler, Complex z0,
                              const TrajectoryOptions& opt = {});

/// m x'' = -d/dx (V + Q) with x(0) = x0, x'(0) = v0. v0 must equal the
/// Bohmian velocity at x0 (1e-6 relative); otherwise DomainError.
Trajectory newton_effective(const WaveSampler& sampler, double x0, double v0,
                            const TrajectoryOptions& opt = {});

/// d/dx Q(x, t) by a five-point central difference, h = 1e-5 max(1, |x|).
double quantum_force(const WaveSampler& sampler, double x, double t);

/// Pointwise mean of x(t). Trajectories on other grids are linearly
/// resampled onto the first one, restricted to the common time range.
Trajectory ensemble_mean(const std::vector<Trajectory>& paths);

struct FieldSample {
  Complex v;
  Complex Q;
};

/// v and Q along a path: real variant via fields_real, otherwise fields_complex.
/// Points where evaluation fails carry NaN.
std::vector<FieldSample> fields_along(const WaveSampler& sampler, const Trajectory& path);

/// First swing of a real path that starts at a turning point.
struct Oscillation {
  bool found = false;
  /// Refined first extremum of x(t) (the far turning point) and its time.
  double max = 0.0;
  double t_max = 0.0;
  /// Time of the following extremum, measured from the start of the path.
  double period = 0.0;
};

/// Locates the first two reversals of x(t) by parabolic interpolation
/// through the three samples around each one.
Oscillation first_oscillation(const Trajectory& path);

}  // namespace bohmtraj
