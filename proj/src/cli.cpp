#include "phs/cli.hpp"

#include "phs/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <limits>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace phs::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

int physics_dimension(const std::string& p) {
  if (p == "wave1d" || p == "beam1d") return 1;
  if (p == "wave2d" || p == "elasticity2d") return 2;
  if (p == "maxwell3d") return 3;
  return 0;
}

int default_cells(const std::string& p) {
  if (p == "wave1d") return 8;
  if (p == "beam1d") return 6;
  if (p == "maxwell3d") return 2;
  return 4;
}

std::vector<std::string> material_names(const std::string& p) {
  if (p == "wave1d" || p == "wave2d") return {"rho", "T"};
  if (p == "elasticity2d") return {"rho", "lambda", "mu", "c11", "c22", "c12", "c66"};
  if (p == "beam1d") return {"mu", "bending"};
  if (p == "maxwell3d") return {"eps", "mu_mag", "eta_inv"};
  return {};
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + v[i];
  return out;
}

class Checker {
 public:
  explicit Checker(std::vector<std::string>& errors) : errors_(errors) {}

  void fail(const std::string& msg) { errors_.push_back(msg); }

  void keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
    for (const auto& [k, v] : obj.items()) {
      if (!allowed.count(k)) {
        std::vector<std::string> names(allowed.begin(), allowed.end());
        fail("unknown key '" + where + k + "' (allowed: " + join(names) + ")");
      }
    }
  }

  std::optional<double> number(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) return std::nullopt;
    const auto& v = obj.at(key);
    if (!v.is_number()) {
      fail(where + key + " must be a number");
      return std::nullopt;
    }
    return v.get<double>();
  }

  std::optional<long long> integer(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) return std::nullopt;
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) {
      fail(where + key + " must be an integer");
      return std::nullopt;
    }
    return v.get<long long>();
  }

  std::optional<std::string> string(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) return std::nullopt;
    const auto& v = obj.at(key);
    if (!v.is_string()) {
      fail(where + key + " must be a string");
      return std::nullopt;
    }
    return v.get<std::string>();
  }

  bool object(const json& obj, const std::string& key) {
    if (!obj.contains(key)) return false;
    if (!obj.at(key).is_object()) {
      fail(key + " must be an object");
      return false;
    }
    return true;
  }

 private:
  std::vector<std::string>& errors_;
};

std::vector<double> number_list(const json& v, const std::string& what, Checker& ck) {
  std::vector<double> out;
  if (v.is_number()) {
    out.push_back(v.get<double>());
  } else if (v.is_array() && !v.empty()) {
    for (const auto& x : v) {
      if (!x.is_number()) {
        ck.fail(what + " must contain only numbers");
        return {};
      }
      out.push_back(x.get<double>());
    }
  } else {
    ck.fail(what + " must be a number or a non-empty array of numbers");
  }
  return out;
}

std::string resolve(const std::string& path, const std::string& base) {
  fs::path p(path);
  if (p.is_relative()) p = fs::path(base) / p;
  return p.lexically_normal().string();
}

CoefficientField field(const ScenarioConfig& cfg, const std::string& name, double fallback, bool allow_zero = false) {
  const auto it = cfg.materials.find(name);
  if (it == cfg.materials.end()) return CoefficientField(name, fallback, allow_zero);
  return CoefficientField(name, Eigen::Map<const Vector>(it->second.data(), static_cast<Eigen::Index>(it->second.size())),
                          allow_zero);
}

Vector raw(const ScenarioConfig& cfg, const std::string& name, double fallback) {
  const auto it = cfg.materials.find(name);
  if (it == cfg.materials.end()) return Vector::Constant(1, fallback);
  return Eigen::Map<const Vector>(it->second.data(), static_cast<Eigen::Index>(it->second.size()));
}

ElasticStiffness stiffness_of(const ScenarioConfig& cfg) {
  const bool voigt = cfg.materials.count("c11") || cfg.materials.count("c22") || cfg.materials.count("c12") ||
                     cfg.materials.count("c66");
  if (!voigt) {
    const Vector lam = raw(cfg, "lambda", 1.0);
    const Vector mu = raw(cfg, "mu", 1.0);
    if (lam.size() != 1 || mu.size() != 1) throw InvalidArgument("lambda and mu must be scalars; use c11..c66 for fields");
    return ElasticStiffness::lame(lam(0), mu(0));
  }
  return ElasticStiffness{raw(cfg, "c11", 3.0), raw(cfg, "c22", 3.0), raw(cfg, "c12", 1.0), raw(cfg, "c66", 1.0)};
}

// ------------------------------------------------------------- inputs ----

std::vector<std::vector<double>> read_samples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open samples file '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    std::vector<double> row;
    double v = 0.0;
    while (ls >> v) row.push_back(v);
    if (!ls.eof()) {
      if (rows.empty()) continue;  // header line
      throw InvalidArgument("samples file '" + path + "': non-numeric row");
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.size() < 2) throw InvalidArgument("samples file '" + path + "' needs at least two rows");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) throw InvalidArgument("samples file '" + path + "': ragged rows");
    if (!(rows[i][0] > rows[i - 1][0])) throw InvalidArgument("samples file '" + path + "': times must increase");
  }
  return rows;
}

InputSignal make_input(const InputSpec& spec, Eigen::Index m) {
  std::vector<int> ports = spec.ports;
  if (ports.empty()) {
    for (Eigen::Index i = 0; i < m; ++i) ports.push_back(static_cast<int>(i));
  }
  for (int p : ports) {
    if (p < 0 || p >= m) {
      std::ostringstream os;
      os << "input port " << p << " out of range (system has " << m << " boundary ports)";
      throw InvalidArgument(os.str());
    }
  }
  Vector mask = Vector::Zero(m);
  for (int p : ports) mask(p) = 1.0;
  if (spec.kind == "zero") return zero_input(m);
  if (spec.kind == "sine") {
    const double w = 2.0 * std::numbers::pi * spec.frequency;
    const double a = spec.amplitude;
    return [mask, w, a](double t) { return Vector(a * std::sin(w * t) * mask); };
  }
  if (spec.kind == "ramp") {
    const double r = spec.rate;
    return [mask, r](double t) { return Vector(r * t * mask); };
  }
  const auto rows = read_samples(spec.file);
  if (static_cast<Eigen::Index>(rows[0].size()) != m + 1) {
    std::ostringstream os;
    os << "samples file '" << spec.file << "' has " << rows[0].size() - 1 << " signal columns, system has " << m
       << " boundary ports";
    throw InvalidArgument(os.str());
  }
  return [rows, m](double t) {
    Vector u(m);
    auto it = std::upper_bound(rows.begin(), rows.end(), t, [](double v, const auto& r) { return v < r[0]; });
    if (it == rows.begin()) {
      for (Eigen::Index i = 0; i < m; ++i) u(i) = rows.front()[i + 1];
    } else if (it == rows.end()) {
      for (Eigen::Index i = 0; i < m; ++i) u(i) = rows.back()[i + 1];
    } else {
      const auto& b = *it;
      const auto& a = *(it - 1);
      const double s = (t - a[0]) / (b[0] - a[0]);
      for (Eigen::Index i = 0; i < m; ++i) u(i) = (1.0 - s) * a[i + 1] + s * b[i + 1];
    }
    return u;
  };
}

// ------------------------------------------------------------ writing ----

struct PendingFile {
  fs::path target;
  std::string bytes;
};

void commit_files(const std::vector<PendingFile>& files) {
  std::vector<fs::path> temps;
  try {
    for (const auto& f : files) {
      fs::create_directories(f.target.parent_path().empty() ? fs::path(".") : f.target.parent_path());
      fs::path tmp = f.target;
      tmp += ".tmp";
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
      temps.push_back(tmp);
      out.write(f.bytes.data(), static_cast<std::streamsize>(f.bytes.size()));
      out.close();
      if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
    }
  } catch (...) {
    std::error_code ec;
    for (const auto& t : temps) fs::remove(t, ec);
    throw;
  }
  for (std::size_t i = 0; i < files.size(); ++i) fs::rename(temps[i], files[i].target);
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

const std::vector<std::string>& supported_physics() {
  static const std::vector<std::string> names = {"wave1d", "wave2d", "elasticity2d", "beam1d", "maxwell3d"};
  return names;
}

// ------------------------------------------------------------- config ----

ConfigResult parse_config(const std::string& text, const std::string& base_dir) {
  ConfigResult result;
  auto& errors = result.errors;
  Checker ck(errors);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    errors.push_back(std::string("config is not valid JSON: ") + e.what());
    return result;
  }
  if (!doc.is_object()) {
    errors.push_back("config must be a JSON object");
    return result;
  }
  ScenarioConfig cfg;
  ck.keys(doc, "", {"physics", "grid", "materials", "input", "initial_state", "dt", "steps", "outputs", "tolerances"});

  int dim = 0;
  if (auto p = ck.string(doc, "physics", "")) {
    cfg.physics = *p;
    dim = physics_dimension(cfg.physics);
    if (dim == 0) errors.push_back("unknown physics '" + cfg.physics + "' (supported: " + join(supported_physics()) + ")");
  } else if (!doc.contains("physics")) {
    errors.push_back("missing required key 'physics'");
  }

  // grid
  std::vector<double> cells;
  std::vector<double> lengths{1.0};
  if (ck.object(doc, "grid")) {
    const auto& g = doc.at("grid");
    ck.keys(g, "grid.", {"cells", "lengths"});
    if (g.contains("cells")) cells = number_list(g.at("cells"), "grid.cells", ck);
    if (g.contains("lengths")) lengths = number_list(g.at("lengths"), "grid.lengths", ck);
  }
  if (dim > 0) {
    if (cells.empty()) cells.push_back(default_cells(cfg.physics));
    if (cells.size() == 1) cells.resize(dim, cells[0]);
    if (lengths.size() == 1) lengths.resize(dim, lengths[0]);
    if (static_cast<int>(cells.size()) != dim || static_cast<int>(lengths.size()) != dim) {
      std::ostringstream os;
      os << "grid for " << cfg.physics << " needs 1 or " << dim << " entries in cells and lengths";
      errors.push_back(os.str());
    } else {
      cfg.grid.dimension = dim;
      for (double c : cells) {
        if (c != std::floor(c)) errors.push_back("grid.cells must be integers");
        cfg.grid.cells_per_axis.push_back(static_cast<int>(c));
      }
      cfg.grid.lengths_per_axis = lengths;
      try {
        cfg.grid.validate();
        if (cfg.physics == "beam1d" && cfg.grid.cells_per_axis[0] < 4) {
          errors.push_back("grid too small: beam1d needs >= 4 cells");
        }
      } catch (const InvalidArgument& e) {
        errors.push_back(e.what());
      }
    }
  }

  // materials
  if (ck.object(doc, "materials")) {
    const auto& m = doc.at("materials");
    const auto allowed = material_names(cfg.physics);
    for (const auto& [k, v] : m.items()) {
      if (dim > 0 && std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
        errors.push_back("unknown material '" + k + "' for " + cfg.physics + " (allowed: " + join(allowed) + ")");
        continue;
      }
      auto vals = number_list(v, "materials." + k, ck);
      const bool may_be_zero = k == "eta_inv" || k == "lambda" || k == "c12";
      const bool may_be_negative = k == "lambda" || k == "c12";
      for (double x : vals) {
        if (!std::isfinite(x) || (!may_be_negative && (x < 0.0 || (!may_be_zero && x == 0.0)))) {
          errors.push_back("materials." + k + " must be " + (may_be_zero ? "nonnegative" : "positive") + " and finite");
          break;
        }
      }
      cfg.materials[k] = std::move(vals);
    }
    const bool lame = m.contains("lambda") || m.contains("mu");
    const bool voigt = m.contains("c11") || m.contains("c22") || m.contains("c12") || m.contains("c66");
    if (cfg.physics == "elasticity2d" && lame && voigt) {
      errors.push_back("materials: give either lambda/mu or c11/c22/c12/c66, not both");
    }
  }

  // input
  if (ck.object(doc, "input")) {
    const auto& in = doc.at("input");
    ck.keys(in, "input.", {"kind", "frequency", "amplitude", "rate", "ports", "file"});
    if (auto k = ck.string(in, "kind", "input.")) cfg.input.kind = *k;
    const std::set<std::string> kinds{"zero", "sine", "ramp", "samples"};
    if (!kinds.count(cfg.input.kind)) {
      errors.push_back("input.kind '" + cfg.input.kind + "' is not one of zero, sine, ramp, samples");
    }
    if (auto f = ck.number(in, "frequency", "input.")) cfg.input.frequency = *f;
    if (auto a = ck.number(in, "amplitude", "input.")) cfg.input.amplitude = *a;
    if (auto r = ck.number(in, "rate", "input.")) cfg.input.rate = *r;
    if (in.contains("ports")) {
      const auto& p = in.at("ports");
      if (!p.is_array()) {
        errors.push_back("input.ports must be an array of port indices");
      } else {
        for (const auto& x : p) {
          if (!x.is_number_integer() || x.get<long long>() < 0) {
            errors.push_back("input.ports must contain nonnegative integers");
            break;
          }
          cfg.input.ports.push_back(x.get<int>());
        }
      }
    }
    if (auto f = ck.string(in, "file", "input.")) cfg.input.file = resolve(*f, base_dir);
    if (cfg.input.kind == "samples") {
      if (cfg.input.file.empty()) {
        errors.push_back("input.kind 'samples' requires input.file");
      } else if (!fs::exists(cfg.input.file)) {
        errors.push_back("input.file '" + cfg.input.file + "' does not exist");
      }
    }
    if (cfg.input.kind == "sine" && !(cfg.input.frequency >= 0.0)) errors.push_back("input.frequency must be >= 0");
  }

  // initial state
  if (ck.object(doc, "initial_state")) {
    const auto& is = doc.at("initial_state");
    ck.keys(is, "initial_state.", {"kind", "index", "file"});
    if (auto k = ck.string(is, "kind", "initial_state.")) cfg.initial.kind = *k;
    if (cfg.initial.kind != "zero" && cfg.initial.kind != "mode" && cfg.initial.kind != "file") {
      errors.push_back("initial_state.kind '" + cfg.initial.kind + "' is not one of zero, mode, file");
    }
    if (auto i = ck.integer(is, "index", "initial_state.")) {
      if (*i < 0) errors.push_back("initial_state.index must be >= 0");
      cfg.initial.index = static_cast<int>(*i);
    }
    if (auto f = ck.string(is, "file", "initial_state.")) cfg.initial.file = resolve(*f, base_dir);
    if (cfg.initial.kind == "file") {
      if (cfg.initial.file.empty()) {
        errors.push_back("initial_state.kind 'file' requires initial_state.file");
      } else if (!fs::exists(cfg.initial.file)) {
        errors.push_back("initial_state.file '" + cfg.initial.file + "' does not exist");
      }
    }
  }

  // time stepping
  if (auto dt = ck.number(doc, "dt", "")) {
    cfg.dt = *dt;
    if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) errors.push_back("dt must be positive");
  } else if (!doc.contains("dt")) {
    errors.push_back("missing required key 'dt'");
  }
  if (auto s = ck.integer(doc, "steps", "")) {
    if (*s < 1) errors.push_back("steps must be >= 1");
    cfg.steps = static_cast<int>(*s);
  } else if (!doc.contains("steps")) {
    errors.push_back("missing required key 'steps'");
  }

  // outputs
  if (ck.object(doc, "outputs")) {
    const auto& o = doc.at("outputs");
    ck.keys(o, "outputs.", {"directory", "csv", "manifest", "snapshot_every", "snapshot_file"});
    if (auto d = ck.string(o, "directory", "outputs.")) cfg.outputs.directory = *d;
    if (auto c = ck.string(o, "csv", "outputs.")) cfg.outputs.csv = *c;
    if (auto m = ck.string(o, "manifest", "outputs.")) cfg.outputs.manifest = *m;
    if (auto s = ck.string(o, "snapshot_file", "outputs.")) cfg.outputs.snapshot_file = *s;
    if (auto k = ck.integer(o, "snapshot_every", "outputs.")) {
      if (*k < 0) errors.push_back("outputs.snapshot_every must be >= 0");
      cfg.outputs.snapshot_every = static_cast<int>(*k);
    }
  }

  // tolerances
  if (ck.object(doc, "tolerances")) {
    const auto& t = doc.at("tolerances");
    ck.keys(t, "tolerances.", {"green", "skew", "split", "dirac", "balance"});
    auto tol = [&](const char* key, double& slot) {
      if (auto v = ck.number(t, key, "tolerances.")) {
        if (!(*v > 0.0)) errors.push_back(std::string("tolerances.") + key + " must be positive");
        slot = *v;
      }
    };
    tol("green", cfg.tolerances.green);
    tol("skew", cfg.tolerances.skew);
    tol("split", cfg.tolerances.split);
    tol("dirac", cfg.tolerances.dirac);
    tol("balance", cfg.tolerances.balance);
  }

  if (errors.empty()) result.config = std::move(cfg);
  return result;
}

ConfigResult load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    ConfigResult r;
    r.errors.push_back("cannot open config file '" + path + "'");
    return r;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  const fs::path base = fs::path(path).parent_path();
  return parse_config(ss.str(), base.empty() ? "." : base.string());
}

std::string config_to_json(const ScenarioConfig& cfg) {
  json j;
  j["physics"] = cfg.physics;
  j["grid"] = {{"cells", cfg.grid.cells_per_axis}, {"lengths", cfg.grid.lengths_per_axis}};
  json mats = json::object();
  for (const auto& [k, v] : cfg.materials) mats[k] = v.size() == 1 ? json(v[0]) : json(v);
  j["materials"] = mats;
  json in = {{"kind", cfg.input.kind}};
  if (cfg.input.kind == "sine") {
    in["frequency"] = cfg.input.frequency;
    in["amplitude"] = cfg.input.amplitude;
  } else if (cfg.input.kind == "ramp") {
    in["rate"] = cfg.input.rate;
  } else if (cfg.input.kind == "samples") {
    in["file"] = cfg.input.file;
  }
  if (cfg.input.kind != "zero") in["ports"] = cfg.input.ports;
  j["input"] = in;
  json is = {{"kind", cfg.initial.kind}};
  if (cfg.initial.kind == "mode") is["index"] = cfg.initial.index;
  if (cfg.initial.kind == "file") is["file"] = cfg.initial.file;
  j["initial_state"] = is;
  j["dt"] = cfg.dt;
  j["steps"] = cfg.steps;
  j["outputs"] = {{"directory", cfg.outputs.directory},
                  {"csv", cfg.outputs.csv},
                  {"manifest", cfg.outputs.manifest},
                  {"snapshot_every", cfg.outputs.snapshot_every},
                  {"snapshot_file", cfg.outputs.snapshot_file}};
  j["tolerances"] = {{"green", cfg.tolerances.green},
                     {"skew", cfg.tolerances.skew},
                     {"split", cfg.tolerances.split},
                     {"dirac", cfg.tolerances.dirac},
                     {"balance", cfg.tolerances.balance}};
  return j.dump(2);
}

ScenarioConfig default_config(const std::string& physics, int n) {
  const int dim = physics_dimension(physics);
  if (dim == 0) throw InvalidArgument("unknown physics '" + physics + "' (supported: " + join(supported_physics()) + ")");
  ScenarioConfig cfg;
  cfg.physics = physics;
  cfg.grid.dimension = dim;
  cfg.grid.cells_per_axis.assign(dim, n > 0 ? n : default_cells(physics));
  cfg.grid.lengths_per_axis.assign(dim, 1.0);
  cfg.dt = 0.01;
  cfg.steps = 1;
  return cfg;
}

Scenario build_scenario(const ScenarioConfig& cfg) {
  const auto& p = cfg.physics;
  if (p == "wave1d" || p == "wave2d") {
    const auto rho = field(cfg, "rho", 1.0);
    const auto t = field(cfg, "T", 1.0);
    PortSystem sys = build_wave(cfg.grid, rho, t);
    ConstitutiveLaw law = build_constitutive("wave", sys, {rho, t});
    return {std::move(sys), std::move(law)};
  }
  if (p == "elasticity2d") {
    const auto rho = field(cfg, "rho", 1.0);
    const ElasticStiffness st = stiffness_of(cfg);
    PortSystem sys = build_elasticity_2d(cfg.grid, rho, st);
    ConstitutiveLaw law = build_constitutive(sys, rho, st);
    return {std::move(sys), std::move(law)};
  }
  if (p == "beam1d") {
    const auto mu = field(cfg, "mu", 1.0);
    const auto eb = field(cfg, "bending", 1.0);
    PortSystem sys = build_beam_1d(cfg.grid, mu, eb);
    ConstitutiveLaw law = build_constitutive("beam", sys, {mu, eb});
    return {std::move(sys), std::move(law)};
  }
  if (p == "maxwell3d") {
    const auto eps = field(cfg, "eps", 1.0);
    const auto mu = field(cfg, "mu_mag", 1.0);
    const auto eta = field(cfg, "eta_inv", 0.0, true);
    PortSystem sys = build_maxwell_3d(cfg.grid, eps, mu, eta);
    ConstitutiveLaw law = build_constitutive("maxwell", sys, {eps, mu, eta});
    return {std::move(sys), std::move(law)};
  }
  throw InvalidArgument("unknown physics '" + p + "' (supported: " + join(supported_physics()) + ")");
}

// ------------------------------------------------------------- verify ----

bool VerifyReport::all_pass() const {
  return std::all_of(lines.begin(), lines.end(), [](const VerifyLine& l) { return l.pass; });
}

const VerifyLine* VerifyReport::find(const std::string& name) const {
  for (const auto& l : lines) {
    if (l.name == name) return &l;
  }
  return nullptr;
}

std::string VerifyReport::text() const {
  std::ostringstream os;
  os << "system " << label << ": X1=" << x1 << " X2=" << x2 << " U1=" << u1 << " U2=" << u2 << "\n";
  os.precision(3);
  for (const auto& l : lines) {
    os << (l.pass ? "PASS " : "FAIL ") << l.name << "  residual=" << std::scientific << l.residual
       << " tol=" << l.tolerance << std::defaultfloat;
    if (!l.detail.empty()) os << "  (" << l.detail << ")";
    os << "\n";
  }
  os << (all_pass() ? "verdict: PASS" : "verdict: FAIL") << "\n";
  return os.str();
}

std::string VerifyReport::json() const {
  phs::cli::json j;
  j["system"] = label;
  j["dims"] = {{"X1", x1}, {"X2", x2}, {"U1", u1}, {"U2", u2}};
  phs::cli::json arr = phs::cli::json::array();
  for (const auto& l : lines) {
    arr.push_back({{"name", l.name},
                   {"pass", l.pass},
                   {"residual", finite_or_null(l.residual)},
                   {"tolerance", l.tolerance},
                   {"detail", l.detail}});
  }
  j["checks"] = arr;
  j["pass"] = all_pass();
  return j.dump(2);
}

VerifyReport verify_system(const PortSystem& sys, const Tolerances& tol) {
  VerifyReport rep;
  rep.label = sys.label;
  rep.x1 = sys.x1.dim();
  rep.x2 = sys.x2.dim();
  rep.u1 = sys.u1.dim();
  rep.u2 = sys.u2.dim();

  const double gres = green_residual(sys);
  const double gscale = green_scale(sys);
  const double gtol = tol.green * gscale;
  rep.lines.push_back({"green_identity", gres <= gtol, gres, gtol, "Lt M2 - M1 K = boundary pairing"});

  // Assemble even when the Green identity fails so the downstream residuals are visible.
  const ExtendedOperator op = assemble_extended(sys, std::numeric_limits<double>::infinity());
  const double sres = op.skew_residual();
  const double stol = tol.skew * std::max(1.0, inf_norm(op.extended.gram() * op.full));
  rep.lines.push_back({"skew_extended", sres <= stol, sres, stol, "Gram * full + (Gram * full)^T"});

  const Eigen::Index total = op.full.rows();
  if (total <= 40) {
    const SubspaceBasis graph = graph_subspace(op.full);
    const SubspaceBasis comp = orthogonal_companion(graph, op.extended);
    const double dist = subspace_distance(graph.basis(), comp.basis());
    rep.lines.push_back({"dirac_graph", dist <= tol.dirac, dist, tol.dirac, "companion of the graph equals the graph"});
  } else {
    std::ostringstream os;
    os << "skipped at dim " << total << " > 40; skew residual stands in";
    rep.lines.push_back({"dirac_graph", sres <= stol, sres, stol, os.str()});
  }

  const BcsReport bcs = check_bcs_conditions(sys);
  for (const auto& c : bcs.conditions) {
    double r = 0.0;
    double t = 0.0;
    if (c.name.rfind("(i)", 0) == 0) {
      r = static_cast<double>(bcs.dim_u - bcs.rank_g);
    } else if (c.name.rfind("(ii)", 0) == 0) {
      r = bcs.skew_residual;
      t = 1e-12;
    } else if (c.name.rfind("(iii)", 0) == 0) {
      r = bcs.cond_minus;
      t = 1e12;
    } else if (c.name.rfind("(iv)", 0) == 0) {
      r = static_cast<double>(bcs.resolvent_kernel_dim);
    } else {
      r = bcs.cond_plus;
      t = 1e12;
    }
    rep.lines.push_back({"bcs " + c.name, c.pass, r, t, c.detail});
  }

  const Matrix j = sys.structure_matrix();
  const Matrix g = sys.boundary_map();
  const double jn = std::max(1.0, inf_norm(j));
  const double split_tol = tol.split * jn;
  const OperatorSplit coll = collocated_split(sys);
  const double cres = split_residual(j, coll, g);
  const bool anti = is_block_antidiagonal(coll.B, sys);
  rep.lines.push_back({"split_collocated", cres <= split_tol && anti, cres, split_tol,
                       anti ? "J = A + B G, B block-antidiagonal" : "B is not block-antidiagonal"});
  if (g.rows() == 0 || numerical_rank(g, 1e-10) == g.rows()) {
    const OperatorSplit proj = split_operator(sys);
    const double pres = split_residual(j, proj, g);
    const bool panti = is_block_antidiagonal(proj.B, sys);
    rep.lines.push_back({"split_projection", pres <= split_tol && panti, pres, split_tol,
                         panti ? "J = A + B G with Gram right inverse" : "B is not block-antidiagonal"});
  } else {
    rep.lines.push_back({"split_projection", false, 0.0, split_tol, "G is rank-deficient"});
  }
  return rep;
}

VerifyReport verify_suite(const std::string& target, int n, const std::string& corrupt) {
  ScenarioConfig cfg;
  const auto& names = supported_physics();
  if (std::find(names.begin(), names.end(), target) != names.end()) {
    cfg = default_config(target, n);
  } else {
    ConfigResult r = load_config(target);
    if (!r.ok()) {
      throw InvalidArgument("'" + target + "' is neither a physics id (" + join(names) +
                            ") nor a valid config: " + join(r.errors));
    }
    cfg = *r.config;
    if (n > 0) cfg.grid.cells_per_axis.assign(cfg.grid.dimension, n);
  }
  Scenario sc = build_scenario(cfg);
  if (corrupt == "K") {
    sc.system.K = -sc.system.K;
  } else if (corrupt == "L") {
    sc.system.L = -sc.system.L;
  } else if (corrupt == "beta") {
    sc.system.beta1 = -sc.system.beta1;
    sc.system.beta2 = -sc.system.beta2;
  } else if (!corrupt.empty()) {
    throw InvalidArgument("--corrupt accepts K, L or beta");
  }
  return verify_system(sc.system, cfg.tolerances);
}

// ---------------------------------------------------------------- run ----

RunResult run_scenario(const ScenarioConfig& cfg) {
  RunResult rr;
  const auto t0 = std::chrono::steady_clock::now();
  Scenario sc;
  try {
    sc = build_scenario(cfg);
  } catch (const std::exception& e) {
    rr.exit_code = 2;
    rr.message = std::string("cannot build scenario: ") + e.what();
    return rr;
  }
  const VerifyReport rep = verify_system(sc.system, cfg.tolerances);
  if (!rep.all_pass()) {
    std::ostringstream os;
    os << "structural verification failed before time stepping:";
    for (const auto& l : rep.lines) {
      if (!l.pass) os << " " << l.name << " residual " << l.residual << " (tol " << l.tolerance << ");";
    }
    rr.exit_code = 1;
    rr.message = os.str();
    return rr;
  }

  Trajectory traj;
  try {
    const Eigen::Index m = sc.system.input_dim();
    const InputSignal u = make_input(cfg.input, m);
    Vector x0 = Vector::Zero(sc.law.storage_dim());
    if (cfg.initial.kind == "mode") {
      const ExtendedOperator op = assemble_extended(sc.system, cfg.tolerances.green);
      x0 = discrete_mode(make_dynamics(op, sc.law, sc.system), cfg.initial.index);
    } else if (cfg.initial.kind == "file") {
      std::ifstream in(cfg.initial.file, std::ios::binary);
      std::vector<double> times;
      std::vector<Vector> states;
      read_state_snapshots(in, times, states);
      if (states.empty() || states.back().size() != x0.size()) {
        std::ostringstream os;
        os << "initial_state.file must hold states of dimension " << x0.size();
        throw InvalidArgument(os.str());
      }
      x0 = states.back();
    }
    SimulationOptions opts;
    opts.balance_tol = cfg.tolerances.balance;
    opts.snapshot_every = cfg.outputs.snapshot_every;
    traj = simulate(sc.system, sc.law, u, x0, cfg.dt, cfg.steps, opts);
  } catch (const InvalidArgument& e) {
    rr.exit_code = 2;
    rr.message = e.what();
    return rr;
  } catch (const std::exception& e) {
    rr.exit_code = 1;
    rr.message = e.what();
    return rr;
  }

  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const fs::path dir(cfg.outputs.directory);
  std::vector<PendingFile> files;
  {
    std::ostringstream csv;
    write_trajectory_csv(csv, traj);
    files.push_back({dir / cfg.outputs.csv, csv.str()});
  }
  if (cfg.outputs.snapshot_every > 0) {
    std::ostringstream bin(std::ios::binary);
    write_state_snapshots(bin, traj.state_times, traj.states);
    files.push_back({dir / cfg.outputs.snapshot_file, bin.str()});
  }
  json man;
  man["config"] = json::parse(config_to_json(cfg));
  man["dims"] = {{"X1", rep.x1}, {"X2", rep.x2}, {"U1", rep.u1}, {"U2", rep.u2}};
  auto res = [&](const char* name) {
    const VerifyLine* l = rep.find(name);
    return l ? finite_or_null(l->residual) : json(nullptr);
  };
  man["residuals"] = {{"green", res("green_identity")},
                      {"skew", res("skew_extended")},
                      {"split", res("split_collocated")},
                      {"dirac", res("dirac_graph")}};
  man["verification"] = json::parse(rep.json());
  const double max_res = traj.balance_residuals.empty()
                             ? 0.0
                             : *std::max_element(traj.balance_residuals.begin(), traj.balance_residuals.end());
  double joule = 0.0;
  for (double d : traj.dissipation) joule += d * cfg.dt;
  man["simulation"] = {{"steps", cfg.steps},
                       {"dt", cfg.dt},
                       {"initial_H", traj.energies.front()},
                       {"final_H", traj.energies.back()},
                       {"max_balance_residual", max_res},
                       {"dissipated_energy", joule},
                       {"warnings", traj.warnings}};
  json outs = {{"csv", (dir / cfg.outputs.csv).string()}, {"manifest", (dir / cfg.outputs.manifest).string()}};
  if (cfg.outputs.snapshot_every > 0) outs["snapshots"] = (dir / cfg.outputs.snapshot_file).string();
  man["outputs"] = outs;
  man["wall_time_seconds"] = wall;
  files.push_back({dir / cfg.outputs.manifest, man.dump(2) + "\n"});

  try {
    commit_files(files);
  } catch (const std::exception& e) {
    rr.exit_code = 1;
    rr.message = std::string("cannot write outputs: ") + e.what();
    return rr;
  }
  for (const auto& f : files) rr.artifacts.push_back(f.target.string());
  std::ostringstream os;
  os << "ok: " << cfg.steps << " steps, H " << traj.energies.front() << " -> " << traj.energies.back()
     << ", max balance residual " << max_res;
  for (const auto& w : traj.warnings) os << "\nwarning: " << w;
  rr.message = os.str();
  return rr;
}

std::string format_convergence(const ConvergenceResult& res, bool as_json) {
  if (as_json) {
    json j;
    j["case"] = res.case_id;
    j["cells"] = res.cells;
    j["errors"] = res.errors;
    j["orders"] = res.orders;
    j["monotone"] = res.monotone;
    return j.dump(2) + "\n";
  }
  std::ostringstream os;
  os.precision(6);
  os << "case " << res.case_id << "\n";
  for (std::size_t i = 0; i < res.cells.size(); ++i) {
    os << "n=" << res.cells[i] << "  error=" << std::scientific << res.errors[i] << std::defaultfloat;
    if (i > 0) os << "  order=" << res.orders[i - 1];
    os << "\n";
  }
  if (!res.monotone) os << "warning: errors do not decrease monotonically\n";
  return os.str();
}

}  // namespace phs::cli
