#include <functional>

#include "bohmtraj/cli.hpp"

namespace bohmtraj {

namespace {

PtModel pt(double kappa, double lambda) {
  PtModel m;
  m.kappa = kappa;
  m.lambda = lambda;
  return m;
}

ScenarioConfig base(const std::string& id, Model model, Variant variant) {
  ScenarioConfig c;
  c.name = id;
  c.model = model;
  c.variant = variant;
  c.output_dir = id;
  c.prefix = id;
  return c;
}

ScenarioConfig klauder(const std::string& id, Model model, Variant variant, std::vector<double> J) {
  ScenarioConfig c = base(id, model, variant);
  c.state = StateKind::Klauder;
  c.J = std::move(J);
  return c;
}

ScenarioConfig stationary(const std::string& id, Model model, int n, std::vector<Complex> x0,
                          double t1) {
  ScenarioConfig c = base(id, model, Variant::Complex);
  c.state = StateKind::Stationary;
  c.levels = {n};
  c.x0 = std::move(x0);
  c.t1 = t1;
  return c;
}

const std::vector<std::pair<std::string, std::function<ScenarioConfig()>>>& table() {
  using namespace std::complex_literals;
  static const std::vector<std::pair<std::string, std::function<ScenarioConfig()>>> presets = {
      {"fig1",
       [] {
         auto c = klauder("fig1", HoModel{}, Variant::Real, {0.5, 1, 2, 3});
         c.x0 = {2.0};
         c.t1 = 4 * kPi;
         c.samples = 1257;
         return c;
       }},
      {"fig2a",
       [] {
         return stationary("fig2a", HoModel{}, 1, {0.5, 1.5, 2.5, 0.5 + 0.5i, 1.0 + 1.0i, -1.0 + 0.5i},
                           2 * kPi);
       }},
      {"fig2b",
       [] {
         return stationary("fig2b", HoModel{}, 5, {0.2, 0.9, 1.2, 2.0, 3.2, 1.0 + 0.3i, 2.2 - 0.4i},
                           2 * kPi);
       }},
      {"fig3a",
       [] {
         auto c = klauder("fig3a", HoModel{}, Variant::Complex, {0.5, 1, 2, 3});
         c.x0 = {3.0 + 1.0i};
         c.t1 = 2 * kPi;
         c.classical = ClassicalMomentum::InitMomentum;
         return c;
       }},
      {"fig3b",
       [] {
         auto c = klauder("fig3b", HoModel{}, Variant::Complex, {0.5, 1, 2, 3});
         c.x0 = {3.0 - 1.0i};
         c.t1 = 2 * kPi;
         c.classical = ClassicalMomentum::InitMomentum;
         return c;
       }},
      {"fig4a",
       [] {
         auto c = klauder("fig4a", pt(90, 100), Variant::Real, {2, 0.5, 0.1});
         c.x0 = {2.0};
         c.t1 = 0.8;
         return c;
       }},
      {"fig4b",
       [] {
         auto c = klauder("fig4b", pt(2, 3), Variant::Real, {0.0022906, 0.00057265, 0.000114531});
         c.x0 = {2.0};
         c.t1 = 33;
         c.samples = 3301;
         return c;
       }},
      {"fig4c",
       [] {
         auto c = klauder("fig4c", pt(2, 3), Variant::Real, {2, 10, 20});
         c.x0 = {2.0};
         c.t1 = 33;
         c.samples = 3301;
         return c;
       }},
      {"fig4c_ref",
       [] {
         auto c = klauder("fig4c_ref", pt(9, 10), Variant::Real, {20.2846});
         c.x0 = {2.0};
         c.t1 = 33;
         c.samples = 3301;
         return c;
       }},
      {"fig4d",
       [] {
         auto c = klauder("fig4d", pt(2, 3), Variant::Real, {2});
         c.x0 = {0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0};
         c.t1 = 33;
         c.samples = 3301;
         return c;
       }},
      {"fig5a",
       [] {
         auto c = klauder("fig5a", pt(90, 100), Variant::Isochrone, {0.5});
         c.isochrone_t = 0.04;
         c.seed_start = 1.5;
         c.seed_end = 3.5;
         c.isochrone_points = 21;
         c.t1 = 0.27;
         c.samples = 541;
         c.classical = ClassicalMomentum::BohmVelocity;
         c.rel_tol = 1e-12;
         c.abs_tol = 1e-14;
         return c;
       }},
      {"fig5b",
       [] {
         auto c = klauder("fig5b", pt(90, 100), Variant::Complex, {20});
         c.x0 = {3.0 - 1.7i};
         c.p0 = {32.907 + 3.16416i};
         c.t1 = 0.5;
         c.t1_classical = 3;
         c.samples = 3001;
         c.classical = ClassicalMomentum::Explicit;
         c.rel_tol = 1e-12;
         c.abs_tol = 1e-14;
         return c;
       }},
      {"fig6a",
       [] {
         return stationary("fig6a", pt(2, 3), 0, {1.0, 2.0, 3.0 + 0.5i, 4.0 - 0.5i, 5.0 + 0.3i}, 16 * kPi / 5);
       }},
      {"fig6b",
       [] {
         return stationary("fig6b", pt(2, 3), 5, {0.7, 1.5 + 0.2i, 2.4, 3.4 - 0.3i, 4.6, 5.5 + 0.1i}, 10);
       }},
      {"fig7a",
       [] {
         auto c = klauder("fig7a", pt(90, 100), Variant::Density, {2});
         c.density_times = {0, 0.0653, 0.1306, 0.1959, 0.2613};
         c.t1 = 0.2613;
         return c;
       }},
      {"fig7a_broad",
       [] {
         auto c = klauder("fig7a_broad", pt(2, 3), Variant::Density, {0.0022906});
         c.density_times = {0, 2.087, 4.174, 6.261, 8.348};
         c.t1 = 8.348;
         return c;
       }},
      {"fig7b",
       [] {
         auto c = klauder("fig7b", pt(2, 3), Variant::Density, {5});
         c.density_times = {0, 2, 4, 6, 8, 10};
         c.t1 = 10;
         return c;
       }},
      {"fig8a",
       [] {
         auto c = klauder("fig8a", pt(2, 3), Variant::Uncertainty, {0.0022906, 0.00057265, 0.000114531});
         c.t1 = 10;
         c.samples = 101;
         return c;
       }},
      {"fig8a_inset",
       [] {
         auto c = klauder("fig8a_inset", pt(90, 100), Variant::Uncertainty, {0.1});
         c.t1 = 0.27;
         c.samples = 55;
         return c;
       }},
      {"fig8b",
       [] {
         auto c = klauder("fig8b", pt(2, 3), Variant::Uncertainty, {2, 10, 50});
         c.t1 = 10;
         c.samples = 101;
         return c;
       }},
      {"fig11",
       [] {
         auto c = klauder("fig11", pt(90, 100), Variant::Complex, {0.5});
         c.x0 = {3.0 + 1.5i, 4.5};
         c.p0 = {-30.1922 + 0.385121i, 41.8376i};
         c.t1 = 1.78;
         c.samples = 1781;
         c.classical = ClassicalMomentum::Explicit;
         c.rel_tol = 1e-12;
         c.abs_tol = 1e-14;
         return c;
       }},
      {"fig12",
       [] {
         auto c = klauder("fig12", pt(2, 3), Variant::Complex, {0.00057265});
         c.x0 = {3.0 + 1.5i, 2.0};
         c.p0 = {-0.788329 + 0.157336i, -0.49446i};
         c.t1 = 100;
         c.t1_classical = 32;
         c.samples = 2001;
         c.classical = ClassicalMomentum::Explicit;
         c.rel_tol = 1e-12;
         c.abs_tol = 1e-14;
         return c;
       }},
      {"fig13",
       [] {
         auto c = klauder("fig13", pt(2, 3), Variant::Complex, {10});
         c.x0 = {2.0 + 0.2i};
         c.p0 = {-0.665052 - 0.406733i};
         c.t1 = 21;
         c.t1_classical = 32;
         c.samples = 2101;
         c.classical = ClassicalMomentum::Explicit;
         c.rel_tol = 1e-12;
         c.abs_tol = 1e-14;
         return c;
       }},
  };
  return presets;
}

}  // namespace

std::vector<std::string> preset_ids() {
  std::vector<std::string> ids;
  for (const auto& [id, make] : table()) ids.push_back(id);
  return ids;
}

ScenarioConfig preset(const std::string& id) {
  for (const auto& [key, make] : table())
    if (key == id) return make();
  std::string known;
  for (const auto& k : preset_ids()) known += (known.empty() ? "" : ", ") + k;
  throw ConfigError("preset: unknown id '" + id + "' (known: " + known + ")");
}

}  // namespace bohmtraj
