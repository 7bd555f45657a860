#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "bohmtraj/numerics.hpp"

namespace bohmtraj {

using OdeState = std::vector<Complex>;

/// dydt = rhs(t, y). The right-hand side may throw bohmtraj::Error (node,
/// singularity); the integrator treats that as a failed trial step.
using OdeRhs = std::function<void(double t, std::span<const Complex> y, std::span<Complex> dydt)>;

struct OdeProblem {
  OdeRhs rhs;
  OdeState y0;
  double t0 = 0.0;
  double t1 = 1.0;
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
};

enum class OdeStatus {
  Completed,
  StepUnderflow,  // step size collapsed, typically near a singularity
  StepLimit,
};

const char* to_string(OdeStatus status);

struct SampledPath {
  std::vector<double> times;
  std::vector<OdeState> values;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  OdeStatus status = OdeStatus::Completed;
  /// Time reached by the last accepted step.
  double t_reached = 0.0;
  /// Human-readable reason when status != Completed.
  std::string diagnostic;

  bool completed() const { return status == OdeStatus::Completed; }
};

struct OdeOptions {
  /// Output times, monotone in the integration direction and inside [t0, t1].
  /// Empty: record every accepted step.
  std::vector<double> sample_times;
  double initial_step = 0.0;  // 0: automatic
  double max_step = 0.0;      // 0: unbounded
  std::size_t max_steps = 5'000'000;
};

/// Embedded Runge-Kutta 5(4) (Dormand-Prince) with FSAL and fourth-order dense
/// output. On step-size collapse the path up to the last accepted step is
/// returned with status StepUnderflow.
SampledPath adaptive_ode(const OdeProblem& problem, const OdeOptions& options = {});

/// n equally spaced times from t0 to t1 inclusive (n >= 2).
std::vector<double> linspace(double t0, double t1, std::size_t n);

}  // namespace bohmtraj
