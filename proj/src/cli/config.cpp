#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "bohmtraj/cli.hpp"

namespace bohmtraj {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool parse_double_exact(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::string cur;
  std::istringstream in(value);
  while (std::getline(in, cur, ',')) {
    const std::string t = trim(cur);
    if (!t.empty()) items.push_back(t);
  }
  return items;
}

template <class Map>
std::string key_list(const Map& m) {
  std::string out;
  for (const auto& [k, v] : m) {
    if (!out.empty()) out += ", ";
    out += k;
  }
  return out;
}

const std::map<std::string, Variant> kVariants = {
    {"real", Variant::Real},           {"complex", Variant::Complex},
    {"newton", Variant::Newton},       {"classical", Variant::Classical},
    {"conjecture", Variant::Conjecture}, {"isochrone", Variant::Isochrone},
    {"stats", Variant::Stats},         {"density", Variant::Density},
    {"uncertainty", Variant::Uncertainty},
};

const std::map<std::string, StateKind> kStates = {
    {"stationary", StateKind::Stationary},
    {"klauder", StateKind::Klauder},
    {"gaussian", StateKind::Gaussian},
};

const std::map<std::string, ClassicalMomentum> kMomenta = {
    {"none", ClassicalMomentum::None},
    {"init_momentum", ClassicalMomentum::InitMomentum},
    {"bohm_velocity", ClassicalMomentum::BohmVelocity},
    {"explicit", ClassicalMomentum::Explicit},
};

template <class Map, class E>
std::string name_of(const Map& m, E value) {
  for (const auto& [k, v] : m)
    if (v == value) return k;
  return "?";
}

struct Reader {
  std::map<std::string, std::string> values;  // "section.key" -> raw value
  std::set<std::string> used;

  bool has(const std::string& key) const { return values.count(key) != 0; }

  const std::string* raw(const std::string& key) {
    auto it = values.find(key);
    if (it == values.end()) return nullptr;
    used.insert(key);
    return &it->second;
  }

  double number(const std::string& key, double fallback) {
    const std::string* v = raw(key);
    if (!v) return fallback;
    double out;
    if (!parse_double_exact(*v, out) || !std::isfinite(out))
      throw ConfigError(key + ": expected a finite number, got '" + *v + "'");
    return out;
  }

  int integer(const std::string& key, int fallback) {
    const std::string* v = raw(key);
    if (!v) return fallback;
    int out;
    auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
    if (ec != std::errc() || ptr != v->data() + v->size())
      throw ConfigError(key + ": expected an integer, got '" + *v + "'");
    return out;
  }

  std::string text(const std::string& key, const std::string& fallback) {
    const std::string* v = raw(key);
    return v ? *v : fallback;
  }

  std::vector<double> numbers(const std::string& key) {
    std::vector<double> out;
    const std::string* v = raw(key);
    if (!v) return out;
    for (const auto& item : split_list(*v)) {
      double d;
      if (!parse_double_exact(item, d) || !std::isfinite(d))
        throw ConfigError(key + ": expected a list of finite numbers, got '" + item + "'");
      out.push_back(d);
    }
    return out;
  }

  std::vector<int> integers(const std::string& key) {
    std::vector<int> out;
    const std::string* v = raw(key);
    if (!v) return out;
    for (const auto& item : split_list(*v)) {
      int n;
      auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), n);
      if (ec != std::errc() || ptr != item.data() + item.size())
        throw ConfigError(key + ": expected a list of integers, got '" + item + "'");
      out.push_back(n);
    }
    return out;
  }

  std::vector<Complex> complexes(const std::string& key) {
    std::vector<Complex> out;
    const std::string* v = raw(key);
    if (!v) return out;
    for (const auto& item : split_list(*v)) {
      try {
        out.push_back(parse_complex(item));
      } catch (const ConfigError& e) {
        throw ConfigError(key + ": " + e.what());
      }
    }
    return out;
  }

  Complex complex_value(const std::string& key, Complex fallback) {
    const std::string* v = raw(key);
    if (!v) return fallback;
    try {
      return parse_complex(*v);
    } catch (const ConfigError& e) {
      throw ConfigError(key + ": " + e.what());
    }
  }

  template <class Map>
  auto choice(const std::string& key, const Map& m, typename Map::mapped_type fallback) {
    const std::string* v = raw(key);
    if (!v) return fallback;
    auto it = m.find(*v);
    if (it == m.end())
      throw ConfigError(key + ": unknown value '" + *v + "' (expected one of " + key_list(m) + ")");
    return it->second;
  }
};

void check_config(const ScenarioConfig& c) {
  try {
    validate(c.model);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
  if (c.samples < 2) throw ConfigError("run.samples: need at least 2");
  if (!(c.t1 > c.t0) && c.variant != Variant::Stats)
    throw ConfigError("run.t1: must exceed run.t0");
  if (!(c.rel_tol > 0.0)) throw ConfigError("run.rel_tol: must be positive");
  if (!(c.abs_tol > 0.0)) throw ConfigError("run.abs_tol: must be positive");
  if (c.t1_classical < 0.0) throw ConfigError("run.t1_classical: must not be negative");
  switch (c.state) {
    case StateKind::Klauder:
      if (c.J.empty()) throw ConfigError("state.J: klauder state needs at least one J");
      for (double J : c.J)
        if (J < 0.0) throw ConfigError("state.J: values must be non-negative");
      break;
    case StateKind::Stationary:
      if (c.levels.empty()) throw ConfigError("state.n: stationary state needs at least one level");
      for (int n : c.levels)
        if (n < 0) throw ConfigError("state.n: levels must be non-negative");
      break;
    case StateKind::Gaussian:
      if (!std::holds_alternative<HoModel>(c.model))
        throw ConfigError("state.kind: gaussian packets exist for the ho model only");
      break;
  }
  const bool needs_x0 = c.variant == Variant::Real || c.variant == Variant::Complex ||
                        c.variant == Variant::Newton || c.variant == Variant::Classical ||
                        c.variant == Variant::Conjecture;
  if (needs_x0 && c.x0.empty()) throw ConfigError("initial.x0: this variant needs starting positions");
  if (c.variant == Variant::Real || c.variant == Variant::Newton || c.variant == Variant::Conjecture) {
    for (Complex z : c.x0)
      if (z.imag() != 0.0) throw ConfigError("initial.x0: real-axis variants need real positions");
  }
  const bool explicit_p = c.variant == Variant::Classical ||
                          (c.variant == Variant::Complex && c.classical == ClassicalMomentum::Explicit);
  if (explicit_p && c.p0.size() != c.x0.size())
    throw ConfigError("initial.p0: need one momentum per entry of initial.x0");
  if (c.classical == ClassicalMomentum::InitMomentum && !std::holds_alternative<HoModel>(c.model))
    throw ConfigError("run.classical: init_momentum is defined for the ho model only");
  if (c.classical == ClassicalMomentum::InitMomentum && c.state != StateKind::Klauder)
    throw ConfigError("run.classical: init_momentum needs a klauder state");
  if (c.variant == Variant::Isochrone) {
    if (c.isochrone_points < 1) throw ConfigError("isochrone.points: need at least one point");
    if (c.seed_start == c.seed_end && c.isochrone_points > 1)
      throw ConfigError("isochrone.seed_end: seed segment has zero length");
  }
  if ((c.variant == Variant::Density || c.variant == Variant::Uncertainty ||
       c.variant == Variant::Stats || c.variant == Variant::Conjecture ||
       c.variant == Variant::Isochrone) &&
      c.state != StateKind::Klauder)
    throw ConfigError("state.kind: this variant needs a klauder state");
  if (c.variant == Variant::Density && c.density_times.empty())
    throw ConfigError("density.times: need at least one time");
  if (c.grid_points < 2) throw ConfigError("density.grid_points: need at least 2");
  if (c.prefix.empty()) throw ConfigError("output.prefix: must not be empty");
  if (c.prefix.find('/') != std::string::npos) throw ConfigError("output.prefix: must not contain '/'");
}

}  // namespace

std::string format_real(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, end);
}

std::string format_complex(Complex z) {
  const double re = z.real(), im = z.imag();
  if (im == 0.0) return format_real(re);
  std::string out;
  if (re != 0.0) out = format_real(re);
  if (im < 0.0)
    out += "-" + format_real(-im);
  else
    out += (out.empty() ? "" : "+") + format_real(im);
  return out + "i";
}

Complex parse_complex(const std::string& input) {
  std::string s;
  for (char ch : input)
    if (ch != ' ' && ch != '\t') s += ch;
  if (s.empty()) throw ConfigError("empty complex number");
  auto fail = [&]() -> Complex { throw ConfigError("cannot read '" + input + "' as a complex number"); };
  double re = 0.0, im = 0.0;
  if (s.back() != 'i' && s.back() != 'j') {
    if (!parse_double_exact(s, re)) return fail();
    return {re, 0.0};
  }
  s.pop_back();
  // split at the last sign that is not a leading sign or part of an exponent
  std::size_t cut = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      cut = k;
      break;
    }
  }
  std::string re_part = cut == std::string::npos ? "" : s.substr(0, cut);
  std::string im_part = cut == std::string::npos ? s : s.substr(cut);
  if (im_part.empty() || im_part == "+") im_part = "1";
  if (im_part == "-") im_part = "-1";
  if (!re_part.empty() && !parse_double_exact(re_part, re)) return fail();
  if (!parse_double_exact(im_part, im)) return fail();
  if (!std::isfinite(re) || !std::isfinite(im)) return fail();
  return {re, im};
}

ScenarioConfig parse_config(const std::string& text) {
  Reader r;
  std::istringstream in(text);
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError("line " + std::to_string(line_no) + ": unterminated section header");
      section = trim(std::string_view(t).substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = trim(std::string_view(t).substr(0, eq));
    const std::string value = trim(std::string_view(t).substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": missing key");
    const std::string full = section.empty() ? key : section + "." + key;
    if (r.has(full)) throw ConfigError(full + ": given twice");
    r.values[full] = value;
  }

  ScenarioConfig c;
  c.name = r.text("name", c.name);
  const std::string type = r.text("model.type", "ho");
  if (type == "ho") {
    HoModel m;
    m.mass = r.number("model.mass", m.mass);
    m.omega = r.number("model.omega", m.omega);
    m.hbar = r.number("model.hbar", m.hbar);
    c.model = m;
  } else if (type == "pt") {
    PtModel m;
    m.mass = r.number("model.mass", m.mass);
    m.a = r.number("model.a", m.a);
    m.kappa = r.number("model.kappa", m.kappa);
    m.lambda = r.number("model.lambda", m.lambda);
    m.hbar = r.number("model.hbar", m.hbar);
    c.model = m;
  } else {
    throw ConfigError("model.type: unknown value '" + type + "' (expected ho or pt)");
  }

  c.state = r.choice("state.kind", kStates, c.state);
  c.J = r.numbers("state.J");
  c.levels = r.integers("state.n");
  c.centre = r.number("state.centre", c.centre);

  c.variant = r.choice("run.variant", kVariants, c.variant);
  c.t0 = r.number("run.t0", c.t0);
  c.t1 = r.number("run.t1", c.t1);
  c.samples = r.integer("run.samples", c.samples);
  c.rel_tol = r.number("run.rel_tol", c.rel_tol);
  c.abs_tol = r.number("run.abs_tol", c.abs_tol);
  c.classical = r.choice("run.classical", kMomenta, c.classical);
  c.t1_classical = r.number("run.t1_classical", c.t1_classical);

  c.x0 = r.complexes("initial.x0");
  c.p0 = r.complexes("initial.p0");

  c.isochrone_t = r.number("isochrone.t_f", c.isochrone_t);
  c.seed_start = r.complex_value("isochrone.seed_start", c.seed_start);
  c.seed_end = r.complex_value("isochrone.seed_end", c.seed_end);
  c.isochrone_points = r.integer("isochrone.points", c.isochrone_points);

  c.density_times = r.numbers("density.times");
  c.grid_points = r.integer("density.grid_points", c.grid_points);

  c.output_dir = r.text("output.dir", c.output_dir);
  c.prefix = r.text("output.prefix", c.prefix);

  for (const auto& [k, v] : r.values)
    if (!r.used.count(k)) throw ConfigError(k + ": unknown key");
  check_config(c);
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config file: cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string emit_config(const ScenarioConfig& c) {
  std::ostringstream out;
  auto join = [](const auto& items, auto fmt) {
    std::string s;
    for (const auto& item : items) {
      if (!s.empty()) s += ", ";
      s += fmt(item);
    }
    return s;
  };
  auto num = [](double v) { return format_real(v); };
  auto cplx = [](Complex z) { return format_complex(z); };

  out << "name = " << c.name << "\n\n[model]\n";
  if (const auto* ho = std::get_if<HoModel>(&c.model)) {
    out << "type = ho\nmass = " << num(ho->mass) << "\nomega = " << num(ho->omega)
        << "\nhbar = " << num(ho->hbar) << "\n";
  } else {
    const auto& pt = std::get<PtModel>(c.model);
    out << "type = pt\nmass = " << num(pt.mass) << "\na = " << num(pt.a) << "\nkappa = " << num(pt.kappa)
        << "\nlambda = " << num(pt.lambda) << "\nhbar = " << num(pt.hbar) << "\n";
  }

  out << "\n[state]\nkind = " << name_of(kStates, c.state) << "\n";
  if (!c.J.empty()) out << "J = " << join(c.J, num) << "\n";
  if (!c.levels.empty()) out << "n = " << join(c.levels, [](int n) { return std::to_string(n); }) << "\n";
  if (c.state == StateKind::Gaussian) out << "centre = " << num(c.centre) << "\n";

  out << "\n[run]\nvariant = " << name_of(kVariants, c.variant) << "\nt0 = " << num(c.t0)
      << "\nt1 = " << num(c.t1) << "\nsamples = " << c.samples << "\nrel_tol = " << num(c.rel_tol)
      << "\nabs_tol = " << num(c.abs_tol) << "\nclassical = " << name_of(kMomenta, c.classical)
      << "\nt1_classical = " << num(c.t1_classical) << "\n";

  if (!c.x0.empty() || !c.p0.empty()) {
    out << "\n[initial]\n";
    if (!c.x0.empty()) out << "x0 = " << join(c.x0, cplx) << "\n";
    if (!c.p0.empty()) out << "p0 = " << join(c.p0, cplx) << "\n";
  }
  {
    out << "\n[isochrone]\nt_f = " << num(c.isochrone_t) << "\nseed_start = " << cplx(c.seed_start)
        << "\nseed_end = " << cplx(c.seed_end) << "\npoints = " << c.isochrone_points << "\n";
  }
  {
    out << "\n[density]\n";
    if (!c.density_times.empty()) out << "times = " << join(c.density_times, num) << "\n";
    out << "grid_points = " << c.grid_points << "\n";
  }
  out << "\n[output]\ndir = " << c.output_dir << "\nprefix = " << c.prefix << "\n";
  return out.str();
}

}  // namespace bohmtraj
