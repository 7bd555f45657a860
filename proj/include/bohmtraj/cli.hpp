#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "bohmtraj/error.hpp"
#include "bohmtraj/models.hpp"

namespace bohmtraj {

/// Malformed or inconsistent scenario configuration. The message names the field.
class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class StateKind { Stationary, Klauder, Gaussian };

enum class Variant {
  Real,         // dx/dt = v on the real axis
  Complex,      // dz/dt = v~ on the complex plane, optional classical comparison
  Newton,       // m x'' = -d(V + Q)/dx
  Classical,    // complexified Hamilton flow only
  Conjecture,   // closed-form conjectured paths
  Isochrone,    // isochrone points and the trajectories started from them
  Stats,        // coherent-state statistics, no trajectories
  Density,      // |psi|^2 snapshots
  Uncertainty,  // dx dp over time
};

/// How the classical comparison flow of a complex run gets its momentum.
enum class ClassicalMomentum {
  None,
  InitMomentum,  // HO packet matching condition with x_max = peak of the state
  BohmVelocity,  // p0 = m v~(x0, t0)
  Explicit,      // p0 from [initial]
};

struct ScenarioConfig {
  std::string name = "scenario";
  Model model = HoModel{};

  StateKind state = StateKind::Klauder;
  std::vector<double> J;     // Klauder
  std::vector<int> levels;   // Stationary
  double centre = 0.0;       // Gaussian

  Variant variant = Variant::Real;
  double t0 = 0.0;
  double t1 = 1.0;
  int samples = 1001;
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  ClassicalMomentum classical = ClassicalMomentum::None;
  /// End time of the classical comparison; 0 means t1.
  double t1_classical = 0.0;

  std::vector<Complex> x0;
  std::vector<Complex> p0;

  double isochrone_t = 0.0;
  Complex seed_start;
  Complex seed_end;
  int isochrone_points = 21;

  std::vector<double> density_times;
  int grid_points = 801;

  std::string output_dir = "out";
  std::string prefix = "scenario";
};

/// Flat "key = value" text with [section] headers; '#' starts a comment.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::filesystem::path& path);
/// Canonical text form; parse_config(emit_config(c)) reproduces c exactly.
std::string emit_config(const ScenarioConfig& config);

/// Known preset ids in display order.
std::vector<std::string> preset_ids();
/// Throws ConfigError for an unknown id.
ScenarioConfig preset(const std::string& id);

/// Shortest text that reads back to the same double.
std::string format_real(double v);
/// "3-1.7i", "41.8376i", "2"
std::string format_complex(Complex z);
Complex parse_complex(const std::string& text);

struct RunOutcome {
  /// 0 success, 2 a trajectory stopped early (partial output written).
  int exit_code = 0;
  std::vector<std::filesystem::path> files;
  /// Ordered key = value lines, also written to <prefix>_summary.txt.
  std::vector<std::pair<std::string, std::string>> summary;
  std::vector<std::string> warnings;
};

struct RunOptions {
  /// Overrides config.output_dir when non-empty.
  std::filesystem::path output_dir;
  /// 0: BOHMTRAJ_THREADS or the hardware concurrency.
  int threads = 0;
  /// Stats runs only: skip writing files.
  bool write_files = true;
};

/// Runs one scenario, writing CSV files and the summary.
RunOutcome run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

/// Worker count: explicit value, else BOHMTRAJ_THREADS, else hardware threads.
int thread_budget(int requested = 0);

std::string summary_text(const RunOutcome& outcome);

}  // namespace bohmtraj
