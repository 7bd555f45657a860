#pragma once

#include <string>
#include <vector>

#include "bohmtraj/bohmian.hpp"

namespace bohmtraj {

/// Straight seed segment s -> start + s (end - start), s in [0, 1]. Only the
/// real parts of the anchors matter; the imaginary offset is solved for.
struct SeedSegment {
  Complex start;
  Complex end;

  Complex at(double s) const { return start + s * (end - start); }
};

struct IsochroneOptions {
  int n_points = 21;
  /// Target for |Im x(t_f)|; trajectories are integrated at rel_tol = tol.
  double tol = 1e-9;
  /// Worker threads for the anchors (results do not depend on it).
  int threads = 1;
};

struct IsochroneResult {
  double t_f = 0.0;
  std::vector<Complex> points;
  /// |Im x(t_f)| at the root.
  std::vector<double> residuals;
  /// |Im x(t_f)| after re-integrating each point at tol / 10.
  std::vector<double> verified_residuals;
  /// Anchors that produced no point, with the reason.
  std::vector<std::string> skipped;
  /// Adjacent points closer than five seed spacings.
  bool continuous = true;
};

/// Initial positions whose complex Bohmian trajectories sit on the real axis
/// at exactly t = t_f. For each anchor the real part is held fixed and
/// Im x(t_f) = 0 is solved over the imaginary part, starting from the
/// straight-line prediction -t_f Im v~(anchor, 0).
IsochroneResult find_isochrone(const WaveSampler& sampler, double t_f, const SeedSegment& seed,
                               const IsochroneOptions& options = {});

/// Im x(t_f) for a single start, integrated at the given tolerance. NaN when
/// the trajectory does not reach t_f.
double arrival_offset(const WaveSampler& sampler, Complex z0, double t_f, double tol);

}  // namespace bohmtraj
