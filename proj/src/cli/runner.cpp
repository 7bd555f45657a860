#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "bohmtraj/bohmian.hpp"
#include "bohmtraj/classical.hpp"
#include "bohmtraj/cli.hpp"
#include "bohmtraj/coherent.hpp"
#include "bohmtraj/isochrone.hpp"

namespace bohmtraj {

namespace {

using Cell = std::optional<double>;

struct Table {
  std::string stem;
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
};

using Lines = std::vector<std::pair<std::string, std::string>>;

/// Output of one unit of work; merged in job order.
struct JobResult {
  std::vector<Table> tables;
  Lines lines;
  std::vector<std::string> warnings;
  bool incomplete = false;
};

struct StateEntry {
  std::string label;
  WaveSampler sampler;
  std::shared_ptr<const KlauderState> klauder;
  int level = -1;
};

std::string cell_text(const Cell& c) {
  if (!c) return {};
  if (std::isnan(*c)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", *c);
  return buf;
}

void write_table(const std::filesystem::path& file, const Table& table) {
  std::ofstream out(file);
  if (!out) throw Error("cannot write " + file.string());
  for (std::size_t k = 0; k < table.header.size(); ++k) out << (k ? "," : "") << table.header[k];
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << cell_text(row[k]);
    out << "\n";
  }
}

const std::vector<std::string> kTrajectoryHeader = {"t",    "x_re", "x_im", "p_re", "p_im",
                                                    "v_re", "v_im", "Q_re", "Q_im"};

/// Rows t, x, p, v, Q. Real-axis paths leave the imaginary columns empty.
Table trajectory_table(const std::string& stem, const Trajectory& tr, bool complex_valued,
                       const std::vector<FieldSample>* fields) {
  Table t{stem, kTrajectoryHeader, {}};
  auto im = [&](double v) -> Cell { return complex_valued ? Cell(v) : std::nullopt; };
  for (std::size_t k = 0; k < tr.times.size() && k < tr.x.size(); ++k) {
    std::vector<Cell> row(9);
    row[0] = tr.times[k];
    row[1] = tr.x[k].real();
    row[2] = im(tr.x[k].imag());
    if (k < tr.p.size()) {
      row[3] = tr.p[k].real();
      row[4] = im(tr.p[k].imag());
    }
    if (fields && k < fields->size()) {
      row[5] = (*fields)[k].v.real();
      row[6] = im((*fields)[k].v.imag());
      row[7] = (*fields)[k].Q.real();
      row[8] = im((*fields)[k].Q.imag());
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

int samples_for(const ScenarioConfig& c, double t1) {
  const double span = c.t1 - c.t0;
  const double ratio = (t1 - c.t0) / span;
  return std::max(2, static_cast<int>(std::lround((c.samples - 1) * ratio)) + 1);
}

TrajectoryOptions trajectory_options(const ScenarioConfig& c, double t1) {
  TrajectoryOptions o;
  o.t0 = c.t0;
  o.t1 = t1;
  o.samples = samples_for(c, t1);
  o.rel_tol = c.rel_tol;
  o.abs_tol = c.abs_tol;
  return o;
}

const char* status_name(const Trajectory& tr) {
  switch (tr.status) {
    case OdeStatus::Completed:
      return "completed";
    case OdeStatus::StepUnderflow:
      return "stopped";
    case OdeStatus::StepLimit:
      return "step-limit";
  }
  return "?";
}

/// Status, end point and diagnostic of one path under the key prefix.
void describe_path(JobResult& r, const std::string& key, const Trajectory& tr) {
  r.lines.emplace_back(key + ".status", status_name(tr));
  if (!tr.times.empty()) {
    r.lines.emplace_back(key + ".t_end", format_real(tr.times.back()));
    r.lines.emplace_back(key + ".x_end", format_complex(tr.x.back()));
    if (!tr.p.empty()) r.lines.emplace_back(key + ".p_end", format_complex(tr.p.back()));
  }
  if (!tr.completed()) {
    r.incomplete = true;
    r.warnings.push_back(key + ": " + tr.diagnostic);
  }
}

/// sup |a - b| / sup |b| over the times both paths cover, b interpolated linearly.
double relative_separation(const Trajectory& a, const Trajectory& b) {
  if (a.times.empty() || b.times.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double diff = 0.0, scale = 0.0;
  std::size_t j = 0;
  for (std::size_t k = 0; k < a.times.size(); ++k) {
    const double t = a.times[k];
    if (t > b.times.back()) break;
    while (j + 2 < b.times.size() && b.times[j + 1] < t) ++j;
    const double h = b.times[j + 1] - b.times[j];
    const double s = h > 0.0 ? std::clamp((t - b.times[j]) / h, 0.0, 1.0) : 0.0;
    const Complex xb = b.x[j] + s * (b.x[j + 1] - b.x[j]);
    diff = std::max(diff, std::abs(a.x[k] - xb));
    scale = std::max(scale, std::abs(xb));
  }
  return scale > 0.0 ? diff / scale : diff;
}

void parallel_for(int count, int threads, const std::function<void(int)>& body) {
  const int workers = std::clamp(threads, 1, std::max(count, 1));
  if (workers == 1) {
    for (int k = 0; k < count; ++k) body(k);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex guard;
  auto work = [&] {
    for (int k = next++; k < count; k = next++) {
      try {
        body(k);
      } catch (...) {
        std::lock_guard lock(guard);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int id = 0; id < workers; ++id) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<StateEntry> build_states(const ScenarioConfig& c, Lines& lines,
                                     std::vector<std::string>& warnings) {
  std::vector<StateEntry> states;
  switch (c.state) {
    case StateKind::Stationary:
      for (int n : c.levels) {
        StateEntry e;
        e.level = n;
        e.sampler = stationary_sampler(c.model, n);
        e.label = e.sampler.tag;
        states.push_back(std::move(e));
      }
      break;
    case StateKind::Gaussian: {
      StateEntry e;
      e.sampler = gaussian_sampler(std::get<HoModel>(c.model), c.centre);
      e.label = e.sampler.tag;
      states.push_back(std::move(e));
      break;
    }
    case StateKind::Klauder:
      for (double J : c.J) {
        StateEntry e;
        e.klauder = std::make_shared<const KlauderState>(KlauderState::build(c.model, J));
        e.sampler = klauder_sampler(e.klauder);
        e.label = e.sampler.tag;
        states.push_back(std::move(e));
      }
      break;
  }
  for (std::size_t i = 0; i < states.size(); ++i) {
    const std::string key = "state[" + std::to_string(i) + "]";
    const StateEntry& e = states[i];
    lines.emplace_back(key + ".label", e.label);
    if (e.level >= 0) {
      lines.emplace_back(key + ".energy", format_real(energy_level(c.model, e.level)));
    }
    if (!e.klauder) continue;
    const KlauderState& k = *e.klauder;
    const double hw = hbar(c.model) * k.omega();
    lines.emplace_back(key + ".J", format_real(k.J()));
    lines.emplace_back(key + ".truncation", std::to_string(k.truncation()));
    lines.emplace_back(key + ".tail_bound", format_real(k.tail_bound()));
    lines.emplace_back(key + ".mandel_q", format_real(mandel_q(c.model, k.J())));
    lines.emplace_back(key + ".mean_occupation", format_real(mean_occupation_formula(c.model, k.J())));
    lines.emplace_back(key + ".mean_H", format_real(hw * k.J()));
    double series = 0.0;
    for (std::size_t n = 0; n < k.coeffs().size(); ++n) series += k.spectral()[n] * k.coeffs()[n] * k.coeffs()[n];
    lines.emplace_back(key + ".mean_H_series", format_real(hw * series));
    try {
      const PeakResult peak = peak_position(k);
      lines.emplace_back(key + ".x_max", format_real(peak.position));
      if (peak.multimodal) warnings.push_back(key + ": |psi| has several maxima of similar height");
    } catch (const Error& err) {
      warnings.push_back(key + ".x_max: " + err.what());
    }
    if (!k.warning().empty()) warnings.push_back(key + ": " + k.warning());
  }
  return states;
}

double initial_x_max(const StateEntry& e) { return peak_position(*e.klauder).position; }

JobResult real_job(const ScenarioConfig& c, const StateEntry& e, double x0, const std::string& stem,
                   const std::string& key, bool newton) {
  JobResult r;
  const TrajectoryOptions opt = trajectory_options(c, c.t1);
  Trajectory tr;
  if (newton) {
    const double v0 = fields_real(e.sampler, x0, c.t0).v;
    tr = newton_effective(e.sampler, x0, v0, opt);
  } else {
    tr = trajectory_real(e.sampler, x0, opt);
  }
  const auto fields = fields_along(e.sampler, tr);
  r.tables.push_back(trajectory_table(stem, tr, false, &fields));
  r.lines.emplace_back(key + ".file", stem + ".csv");
  r.lines.emplace_back(key + ".kind", newton ? "newton" : "quantum-real");
  r.lines.emplace_back(key + ".state", e.label);
  r.lines.emplace_back(key + ".x0", format_real(x0));
  describe_path(r, key, tr);
  const Oscillation osc = first_oscillation(tr);
  if (osc.found) {
    r.lines.emplace_back(key + ".x_turn", format_real(osc.max));
    r.lines.emplace_back(key + ".period", format_real(osc.period));
  }
  return r;
}

JobResult classical_job(const ScenarioConfig& c, PhasePoint start, const std::string& stem,
                        const std::string& key) {
  JobResult r;
  const double t1 = c.t1_classical > 0.0 ? c.t1_classical : c.t1;
  const Trajectory tr = complex_hamilton_flow(c.model, start, trajectory_options(c, t1));
  r.tables.push_back(trajectory_table(stem, tr, true, nullptr));
  r.lines.emplace_back(key + ".file", stem + ".csv");
  r.lines.emplace_back(key + ".kind", "classical");
  r.lines.emplace_back(key + ".x0", format_complex(start.x));
  r.lines.emplace_back(key + ".p0", format_complex(start.p));
  const Complex h0 = energy(c.model, start);
  r.lines.emplace_back(key + ".energy", format_complex(h0));
  double drift = 0.0;
  for (std::size_t k = 0; k < tr.x.size() && k < tr.p.size(); ++k)
    drift = std::max(drift, std::abs(energy(c.model, {tr.x[k], tr.p[k]}) - h0));
  r.lines.emplace_back(key + ".energy_drift", format_real(drift));
  describe_path(r, key, tr);
  return r;
}

/// Quantum complex path, plus the classical comparison flow when requested.
JobResult complex_job(const ScenarioConfig& c, const StateEntry& e, Complex x0, std::optional<Complex> p0,
                      const std::string& stem, const std::string& classical_stem, const std::string& key,
                      const std::string& classical_key) {
  JobResult r;
  const Trajectory tr = trajectory_complex(e.sampler, x0, trajectory_options(c, c.t1));
  const auto fields = fields_along(e.sampler, tr);
  r.tables.push_back(trajectory_table(stem, tr, true, &fields));
  r.lines.emplace_back(key + ".file", stem + ".csv");
  r.lines.emplace_back(key + ".kind", "quantum-complex");
  r.lines.emplace_back(key + ".state", e.label);
  r.lines.emplace_back(key + ".x0", format_complex(x0));
  try {
    r.lines.emplace_back(key + ".v0", format_complex(fields_complex(e.sampler, x0, c.t0).v));
  } catch (const Error& err) {
    r.warnings.push_back(key + ".v0: " + err.what());
  }
  describe_path(r, key, tr);
  if (!p0) return r;
  JobResult cl = classical_job(c, PhasePoint{x0, *p0}, classical_stem, classical_key);
  Trajectory classical;
  classical.times.reserve(cl.tables[0].rows.size());
  for (const auto& row : cl.tables[0].rows) {
    classical.times.push_back(*row[0]);
    classical.x.emplace_back(*row[1], *row[2]);
  }
  r.lines.emplace_back(key + ".separation", format_real(relative_separation(tr, classical)));
  for (auto& t : cl.tables) r.tables.push_back(std::move(t));
  r.lines.insert(r.lines.end(), cl.lines.begin(), cl.lines.end());
  r.warnings.insert(r.warnings.end(), cl.warnings.begin(), cl.warnings.end());
  r.incomplete = r.incomplete || cl.incomplete;
  return r;
}

JobResult conjecture_job(const ScenarioConfig& c, const StateEntry& e, double x0, const std::string& stem,
                         const std::string& key) {
  JobResult r = real_job(c, e, x0, stem + "_quantum", key, false);
  const TrajectoryOptions opt = trajectory_options(c, c.t1);
  const std::vector<double> times = linspace(opt.t0, opt.t1, static_cast<std::size_t>(opt.samples));
  ConjectureParams params;
  params.x0 = x0;
  Table t{stem, kTrajectoryHeader, {}};
  if (const auto* ho = std::get_if<HoModel>(&c.model)) {
    params.x_max = initial_x_max(e);
    for (double time : times) {
      const ConjecturePoint pt = conjecture_ho(*ho, params, time - c.t0);
      t.rows.push_back({time, pt.x, std::nullopt, std::nullopt, std::nullopt, std::nullopt, std::nullopt, pt.Q,
                        std::nullopt});
    }
  } else {
    Trajectory quantum;
    for (const auto& row : r.tables[0].rows) {
      quantum.times.push_back(*row[0]);
      quantum.x.emplace_back(*row[1], 0.0);
    }
    const Oscillation osc = first_oscillation(quantum);
    if (!osc.found) {
      r.warnings.push_back(key + ": no full swing within the horizon; conjecture skipped");
      return r;
    }
    params.x_max = osc.max;
    params.period = osc.period;
    for (double time : times) {
      t.rows.push_back({time, conjecture_pt(std::get<PtModel>(c.model), params, time - c.t0), std::nullopt,
                        std::nullopt, std::nullopt, std::nullopt, std::nullopt, std::nullopt, std::nullopt});
    }
  }
  double dev = 0.0;
  const auto& q = r.tables[0].rows;
  for (std::size_t k = 0; k < q.size() && k < t.rows.size(); ++k) dev = std::max(dev, std::abs(*q[k][1] - *t.rows[k][1]));
  r.lines.emplace_back(key + ".conjecture_file", stem + ".csv");
  r.lines.emplace_back(key + ".conjecture_deviation", format_real(dev));
  r.tables.push_back(std::move(t));
  return r;
}

}  // namespace

int thread_budget(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("BOHMTRAJ_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::string summary_text(const RunOutcome& outcome) {
  std::string out;
  for (const auto& [k, v] : outcome.summary) out += k + " = " + v + "\n";
  return out;
}

RunOutcome run_scenario(const ScenarioConfig& c, const RunOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  const int threads = thread_budget(options.threads);
  RunOutcome outcome;
  Lines& lines = outcome.summary;

  lines.emplace_back("name", c.name);
  {
    std::istringstream echo(emit_config(c));
    std::string line, section;
    while (std::getline(echo, line)) {
      if (line.empty() || line.front() == '#') continue;
      if (line.front() == '[') {
        section = line.substr(1, line.size() - 2);
        continue;
      }
      const auto eq = line.find(" = ");
      if (eq == std::string::npos || section.empty()) continue;
      lines.emplace_back("config." + section + "." + line.substr(0, eq), line.substr(eq + 3));
    }
  }

  const std::vector<StateEntry> states = build_states(c, lines, outcome.warnings);
  if (c.variant == Variant::Stats && states.size() == 1 && states[0].klauder) {
    // single-state stats runs also get unprefixed keys
    const Lines prefixed = lines;
    for (const char* key : {"mandel_q", "mean_H", "mean_occupation", "x_max"})
      for (const auto& [k, v] : prefixed)
        if (k == std::string("state[0].") + key) lines.emplace_back(key, v);
  }

  const std::filesystem::path dir = options.output_dir.empty() ? std::filesystem::path(c.output_dir)
                                                               : options.output_dir;
  const bool write = options.write_files;
  if (write) std::filesystem::create_directories(dir);

  std::vector<std::function<JobResult()>> jobs;
  const std::string& pre = c.prefix;
  const std::size_t nx = c.x0.size();

  switch (c.variant) {
    case Variant::Stats:
      break;

    case Variant::Real:
    case Variant::Newton:
      for (std::size_t i = 0; i < states.size(); ++i)
        for (std::size_t j = 0; j < nx; ++j) {
          const std::size_t k = i * nx + j;
          const bool newton = c.variant == Variant::Newton;
          jobs.push_back([&, i, j, k, newton] {
            return real_job(c, states[i], c.x0[j].real(),
                            pre + (newton ? "_newton_" : "_quantum_") + std::to_string(k),
                            "traj[" + std::to_string(k) + "]", newton);
          });
        }
      break;

    case Variant::Conjecture:
      for (std::size_t i = 0; i < states.size(); ++i)
        for (std::size_t j = 0; j < nx; ++j) {
          const std::size_t k = i * nx + j;
          jobs.push_back([&, i, j, k] {
            return conjecture_job(c, states[i], c.x0[j].real(), pre + "_conjecture_" + std::to_string(k),
                                  "traj[" + std::to_string(k) + "]");
          });
        }
      break;

    case Variant::Classical:
      for (std::size_t j = 0; j < nx; ++j) {
        jobs.push_back([&, j] {
          return classical_job(c, PhasePoint{c.x0[j], c.p0[j]}, pre + "_classical_" + std::to_string(j),
                               "classical[" + std::to_string(j) + "]");
        });
      }
      break;

    case Variant::Complex:
      for (std::size_t i = 0; i < states.size(); ++i)
        for (std::size_t j = 0; j < nx; ++j) {
          const std::size_t k = i * nx + j;
          jobs.push_back([&, i, j, k]() -> JobResult {
            std::optional<Complex> p0;
            const Complex x0 = c.x0[j];
            JobResult pre_result;
            try {
              switch (c.classical) {
                case ClassicalMomentum::None:
                  break;
                case ClassicalMomentum::Explicit:
                  p0 = c.p0[j];
                  break;
                case ClassicalMomentum::BohmVelocity:
                  p0 = states[i].sampler.mass * fields_complex(states[i].sampler, x0, c.t0).v;
                  break;
                case ClassicalMomentum::InitMomentum:
                  p0 = init_momentum(x0, initial_x_max(states[i]), std::get<HoModel>(c.model)).p;
                  break;
              }
            } catch (const Error& err) {
              pre_result.warnings.push_back("classical[" + std::to_string(k) + "]: " + err.what());
            }
            JobResult r = complex_job(c, states[i], x0, p0, pre + "_quantum_" + std::to_string(k),
                                      pre + "_classical_" + std::to_string(k), "traj[" + std::to_string(k) + "]",
                                      "classical[" + std::to_string(k) + "]");
            r.warnings.insert(r.warnings.begin(), pre_result.warnings.begin(), pre_result.warnings.end());
            return r;
          });
        }
      if (c.state == StateKind::Stationary) {
        for (std::size_t i = 0; i < states.size(); ++i) {
          jobs.push_back([&, i] {
            JobResult r;
            const auto points = fixed_points(c.model, states[i].level);
            const std::string key = "state[" + std::to_string(i) + "].fixed_points";
            r.lines.emplace_back(key, std::to_string(points.size()));
            for (std::size_t q = 0; q < points.size(); ++q)
              r.lines.emplace_back(key + "[" + std::to_string(q) + "]",
                                   format_complex(points[q].z) + " " + to_string(points[q].kind));
            return r;
          });
        }
      }
      break;

    case Variant::Isochrone: {
      const StateEntry* e = &states.front();
      if (states.size() > 1) outcome.warnings.push_back("isochrone: only the first state is used");
      IsochroneOptions io;
      io.n_points = c.isochrone_points;
      io.threads = threads;
      const IsochroneResult iso = find_isochrone(e->sampler, c.isochrone_t, {c.seed_start, c.seed_end}, io);
      Table t{pre + "_isochrone", {"index", "x_re", "x_im", "residual", "verified_residual"}, {}};
      for (std::size_t q = 0; q < iso.points.size(); ++q)
        t.rows.push_back({static_cast<double>(q), iso.points[q].real(), iso.points[q].imag(), iso.residuals[q],
                          iso.verified_residuals[q]});
      if (write) write_table(dir / (t.stem + ".csv"), t);
      outcome.files.push_back(dir / (t.stem + ".csv"));
      lines.emplace_back("isochrone.file", t.stem + ".csv");
      lines.emplace_back("isochrone.t_f", format_real(iso.t_f));
      lines.emplace_back("isochrone.points", std::to_string(iso.points.size()));
      lines.emplace_back("isochrone.skipped", std::to_string(iso.skipped.size()));
      lines.emplace_back("isochrone.continuous", iso.continuous ? "true" : "false");
      double worst = 0.0;
      for (double v : iso.verified_residuals) worst = std::max(worst, v);
      lines.emplace_back("isochrone.max_verified_residual", format_real(worst));
      for (const auto& s : iso.skipped) outcome.warnings.push_back("isochrone: " + s);
      for (std::size_t q = 0; q < iso.points.size(); ++q) {
        jobs.push_back([&, e, q, z0 = iso.points[q]]() -> JobResult {
          std::optional<Complex> p0;
          if (c.classical == ClassicalMomentum::BohmVelocity)
            p0 = e->sampler.mass * fields_complex(e->sampler, z0, c.t0).v;
          else if (c.classical == ClassicalMomentum::Explicit && q < c.p0.size())
            p0 = c.p0[q];
          return complex_job(c, *e, z0, p0, pre + "_quantum_" + std::to_string(q),
                             pre + "_classical_" + std::to_string(q), "traj[" + std::to_string(q) + "]",
                             "classical[" + std::to_string(q) + "]");
        });
      }
      break;
    }

    case Variant::Density:
      for (std::size_t i = 0; i < states.size(); ++i)
        for (std::size_t q = 0; q < c.density_times.size(); ++q) {
          jobs.push_back([&, i, q] {
            JobResult r;
            const KlauderState& k = *states[i].klauder;
            auto [lo, hi] = support(k);
            if (std::holds_alternative<PtModel>(c.model)) {
              const double inset = 1e-6 * std::get<PtModel>(c.model).a;
              lo += inset;
              hi -= inset;
            }
            const double time = c.density_times[q];
            const auto grid = linspace(lo, hi, static_cast<std::size_t>(c.grid_points));
            const std::string stem = pre + "_density_" + std::to_string(i) + "_" + std::to_string(q);
            Table t{stem, {"t", "x", "density"}, {}};
            double best = -1.0, at = 0.0;
            for (const auto& pt : density_snapshot(k, grid, time)) {
              t.rows.push_back({time, pt.x, pt.density});
              if (pt.density > best) best = pt.density, at = pt.x;
            }
            const std::string key = "density[" + std::to_string(i) + "][" + std::to_string(q) + "]";
            r.lines.emplace_back(key + ".file", stem + ".csv");
            r.lines.emplace_back(key + ".t", format_real(time));
            r.lines.emplace_back(key + ".peak_x", format_real(at));
            r.lines.emplace_back(key + ".peak_density", format_real(best));
            r.tables.push_back(std::move(t));
            return r;
          });
        }
      break;

    case Variant::Uncertainty: {
      const auto times = linspace(c.t0, c.t1, static_cast<std::size_t>(c.samples));
      auto reports = std::make_shared<std::vector<MomentReport>>(states.size() * times.size());
      auto errors = std::make_shared<std::vector<std::string>>(reports->size());
      parallel_for(static_cast<int>(reports->size()), threads, [&](int idx) {
        const std::size_t i = idx / times.size(), q = idx % times.size();
        try {
          (*reports)[idx] = moments(*states[i].klauder, times[q]);
        } catch (const ConvergenceError& err) {
          (*errors)[idx] = err.what();
          (*reports)[idx].uncertainty_product = std::numeric_limits<double>::quiet_NaN();
        }
      });
      for (std::size_t i = 0; i < states.size(); ++i) {
        jobs.push_back([&, i, reports, errors, times] {
          JobResult r;
          const std::string stem = pre + "_uncertainty_" + std::to_string(i);
          Table t{stem, {"t", "mean_x", "var_x", "mean_p", "var_p", "product", "norm"}, {}};
          double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0.0;
          int count = 0;
          for (std::size_t q = 0; q < times.size(); ++q) {
            const std::size_t idx = i * times.size() + q;
            const MomentReport& m = (*reports)[idx];
            if (!(*errors)[idx].empty()) r.warnings.push_back(stem + " t=" + format_real(times[q]) + ": " + (*errors)[idx]);
            t.rows.push_back({times[q], m.mean_x, m.var_x, m.mean_p, m.var_p, m.uncertainty_product, m.norm});
            if (std::isfinite(m.uncertainty_product)) {
              lo = std::min(lo, m.uncertainty_product);
              hi = std::max(hi, m.uncertainty_product);
              sum += m.uncertainty_product;
              ++count;
            }
          }
          const std::string key = "uncertainty[" + std::to_string(i) + "]";
          r.lines.emplace_back(key + ".file", stem + ".csv");
          r.lines.emplace_back(key + ".state", states[i].label);
          if (count > 0) {
            r.lines.emplace_back(key + ".mean", format_real(sum / count));
            r.lines.emplace_back(key + ".min", format_real(lo));
            r.lines.emplace_back(key + ".max", format_real(hi));
          }
          r.tables.push_back(std::move(t));
          return r;
        });
      }
      break;
    }
  }

  std::vector<JobResult> results(jobs.size());
  parallel_for(static_cast<int>(jobs.size()), threads, [&](int k) {
    try {
      results[k] = jobs[k]();
    } catch (const Error& err) {
      results[k].incomplete = true;
      results[k].warnings.push_back("job " + std::to_string(k) + ": " + err.what());
    }
  });

  for (const JobResult& r : results) {
    for (const Table& t : r.tables) {
      const auto file = dir / (t.stem + ".csv");
      if (write) write_table(file, t);
      outcome.files.push_back(file);
    }
    lines.insert(lines.end(), r.lines.begin(), r.lines.end());
    outcome.warnings.insert(outcome.warnings.end(), r.warnings.begin(), r.warnings.end());
    if (r.incomplete) outcome.exit_code = 2;
  }

  lines.emplace_back("warnings", std::to_string(outcome.warnings.size()));
  for (std::size_t k = 0; k < outcome.warnings.size(); ++k)
    lines.emplace_back("warning[" + std::to_string(k) + "]", outcome.warnings[k]);
  lines.emplace_back("exit_code", std::to_string(outcome.exit_code));
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", elapsed);
  lines.emplace_back("wall_clock_s", buf);

  if (write) {
    const auto file = dir / (pre + "_summary.txt");
    std::ofstream out(file);
    if (!out) throw Error("cannot write " + file.string());
    out << summary_text(outcome);
    outcome.files.push_back(file);
  }
  return outcome;
}

}  // namespace bohmtraj
