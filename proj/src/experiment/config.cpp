#include "feasib/experiment/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

namespace feasib::experiment {

using nlohmann::json;

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string index(const std::string& path, std::size_t i) { return fmt::format("{}[{}]", path, i); }

void reject_unknown_keys(const json& obj, const std::string& path,
                         std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (std::string_view a : allowed) known = known || key == a;
    if (!known) throw ConfigError(join(path, key), "unknown field");
  }
}

const json& member(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(join(path, key), "missing required field");
  return *it;
}

const json* optional_member(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

double read_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "expected a finite number");
  return v;
}

long long read_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  return j.get<long long>();
}

std::string read_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  return j.get<std::string>();
}

Vector read_vector(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a non-empty array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = read_number(j[i], index(path, i));
  return v;
}

Matrix read_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ConfigError(path, "expected an array of rows");
  const std::size_t rows = j.size();
  Matrix m;
  for (std::size_t r = 0; r < rows; ++r) {
    const Vector row = read_vector(j[r], index(path, r));
    if (r == 0) m.resize(static_cast<Eigen::Index>(rows), row.size());
    if (row.size() != m.cols()) throw ConfigError(index(path, r), "rows must have equal length");
    m.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return m;
}

json write_vector(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json write_matrix(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(write_vector(m.row(r).transpose()));
  return out;
}

BodySpec read_body(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  const std::string kind = read_string(member(j, path, "kind"), join(path, "kind"));
  if (kind == "ellipse") {
    reject_unknown_keys(j, path, {"kind", "center", "angle", "semi_axes"});
    EllipseSpec s;
    s.center = read_vector(member(j, path, "center"), join(path, "center"));
    s.angle = read_number(member(j, path, "angle"), join(path, "angle"));
    const std::string axes_path = join(path, "semi_axes");
    const Vector axes = read_vector(member(j, path, "semi_axes"), axes_path);
    if (axes.size() != 2) throw ConfigError(axes_path, "expected two semi-axes");
    s.semi_a = axes[0];
    s.semi_b = axes[1];
    return s;
  }
  if (kind == "ellipsoid") {
    reject_unknown_keys(j, path, {"kind", "center", "shape"});
    return EllipsoidSpec{read_vector(member(j, path, "center"), join(path, "center")),
                         read_matrix(member(j, path, "shape"), join(path, "shape"))};
  }
  if (kind == "halfspace") {
    reject_unknown_keys(j, path, {"kind", "normal", "offset"});
    return HalfspaceSpec{read_vector(member(j, path, "normal"), join(path, "normal")),
                         read_number(member(j, path, "offset"), join(path, "offset"))};
  }
  if (kind == "ball") {
    reject_unknown_keys(j, path, {"kind", "center", "radius"});
    return BallSpec{read_vector(member(j, path, "center"), join(path, "center")),
                    read_number(member(j, path, "radius"), join(path, "radius"))};
  }
  if (kind == "box") {
    reject_unknown_keys(j, path, {"kind", "lower", "upper"});
    return BoxSpec{read_vector(member(j, path, "lower"), join(path, "lower")),
                   read_vector(member(j, path, "upper"), join(path, "upper"))};
  }
  throw ConfigError(join(path, "kind"),
                    fmt::format("unknown body kind '{}' (ellipse, ellipsoid, halfspace, ball, box)",
                                kind));
}

json write_body(const BodySpec& spec) {
  return std::visit(
      Overloaded{[](const EllipseSpec& s) {
                   return json{{"kind", "ellipse"},
                               {"center", write_vector(s.center)},
                               {"angle", s.angle},
                               {"semi_axes", json::array({s.semi_a, s.semi_b})}};
                 },
                 [](const EllipsoidSpec& s) {
                   return json{{"kind", "ellipsoid"},
                               {"center", write_vector(s.center)},
                               {"shape", write_matrix(s.shape)}};
                 },
                 [](const HalfspaceSpec& s) {
                   return json{{"kind", "halfspace"},
                               {"normal", write_vector(s.normal)},
                               {"offset", s.offset}};
                 },
                 [](const BallSpec& s) {
                   return json{{"kind", "ball"}, {"center", write_vector(s.center)}, {"radius", s.radius}};
                 },
                 [](const BoxSpec& s) {
                   return json{{"kind", "box"},
                               {"lower", write_vector(s.lower)},
                               {"upper", write_vector(s.upper)}};
                 }},
      spec);
}

bool same(const Vector& a, const Vector& b) { return a.size() == b.size() && a == b; }

bool same(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
}

Eigen::Index body_dimension(const BodySpec& spec) {
  return std::visit(Overloaded{[](const EllipseSpec&) -> Eigen::Index { return 2; },
                               [](const EllipsoidSpec& s) { return s.center.size(); },
                               [](const HalfspaceSpec& s) { return s.normal.size(); },
                               [](const BallSpec& s) { return s.center.size(); },
                               [](const BoxSpec& s) { return s.lower.size(); }},
                    spec);
}

// Rebuilds the body, reporting construction failures under the body's path.
ConvexBody checked_body(const BodySpec& spec, const std::string& path, int dimension) {
  if (const auto* e = std::get_if<EllipseSpec>(&spec)) {
    if (e->center.size() != 2) throw ConfigError(join(path, "center"), "ellipse center must be 2D");
    if (!(e->semi_a > 0.0)) throw ConfigError(join(path, "semi_axes") + "[0]", "must be positive");
    if (!(e->semi_b > 0.0)) throw ConfigError(join(path, "semi_axes") + "[1]", "must be positive");
  }
  if (const auto* b = std::get_if<BallSpec>(&spec); b && !(b->radius > 0.0)) {
    throw ConfigError(join(path, "radius"), "must be positive");
  }
  if (const auto* b = std::get_if<BoxSpec>(&spec); b && b->lower.size() != b->upper.size()) {
    throw ConfigError(join(path, "upper"), "lower and upper must have the same length");
  }
  if (body_dimension(spec) != dimension) {
    throw ConfigError(path, fmt::format("body dimension {} does not match dimension {}",
                                        body_dimension(spec), dimension));
  }
  try {
    return build_body(spec);
  } catch (const InvalidInput& err) {
    throw ConfigError(path, err.what());
  }
}

Regime regime_of(SolverKind solver) {
  return solver == SolverKind::ACondG1 ? Regime::OneSet : Regime::TwoSets;
}

bool is_exact(SolverKind solver) {
  return solver == SolverKind::ExactAlt1 || solver == SolverKind::ExactAlt2;
}

bool uses_y0(SolverKind solver) {
  return solver == SolverKind::ACondG2 || solver == SolverKind::Averaged ||
         solver == SolverKind::ExactAlt2;
}

}  // namespace

ConfigError::ConfigError(std::string field, const std::string& message)
    : InvalidInput(fmt::format("{}: {}", field, message)), field_(std::move(field)) {}

std::string_view to_string(SolverKind solver) {
  switch (solver) {
    case SolverKind::ACondG1:
      return "ACondG1";
    case SolverKind::ACondG2:
      return "ACondG2";
    case SolverKind::Averaged:
      return "Averaged";
    case SolverKind::ExactAlt1:
      return "ExactAlt1";
    case SolverKind::ExactAlt2:
      return "ExactAlt2";
  }
  return "?";
}

std::optional<SolverKind> parse_solver(std::string_view name) {
  for (SolverKind s : {SolverKind::ACondG1, SolverKind::ACondG2, SolverKind::Averaged,
                       SolverKind::ExactAlt1, SolverKind::ExactAlt2}) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

bool operator==(const BodySpec& a, const BodySpec& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      Overloaded{[&](const EllipseSpec& s) {
                   const auto& t = std::get<EllipseSpec>(b);
                   return same(s.center, t.center) && s.angle == t.angle && s.semi_a == t.semi_a &&
                          s.semi_b == t.semi_b;
                 },
                 [&](const EllipsoidSpec& s) {
                   const auto& t = std::get<EllipsoidSpec>(b);
                   return same(s.center, t.center) && same(s.shape, t.shape);
                 },
                 [&](const HalfspaceSpec& s) {
                   const auto& t = std::get<HalfspaceSpec>(b);
                   return same(s.normal, t.normal) && s.offset == t.offset;
                 },
                 [&](const BallSpec& s) {
                   const auto& t = std::get<BallSpec>(b);
                   return same(s.center, t.center) && s.radius == t.radius;
                 },
                 [&](const BoxSpec& s) {
                   const auto& t = std::get<BoxSpec>(b);
                   return same(s.lower, t.lower) && same(s.upper, t.upper);
                 }},
      a);
}

bool operator==(const InstanceConfig& a, const InstanceConfig& b) {
  const bool y0_same = a.y0.has_value() == b.y0.has_value() && (!a.y0 || same(*a.y0, *b.y0));
  const auto& s = a.schedule;
  const auto& t = b.schedule;
  return a.name == b.name && a.dimension == b.dimension && a.set_a == b.set_a &&
         a.set_b == b.set_b && same(a.x0, b.x0) && y0_same && a.solver == b.solver &&
         s.gamma0 == t.gamma0 && s.theta0 == t.theta0 && s.lambda0 == t.lambda0 &&
         s.tau == t.tau && s.delta == t.delta && a.stopping.eps_feas == b.stopping.eps_feas &&
         a.stopping.eps_lack == b.stopping.eps_lack &&
         a.stopping.max_outer_iters == b.stopping.max_outer_iters &&
         a.limits.max_inner_iters == b.limits.max_inner_iters &&
         a.limits.degenerate_gap_tol == b.limits.degenerate_gap_tol && a.seed == b.seed;
}

ConvexBody build_body(const BodySpec& spec) {
  return std::visit(
      Overloaded{[](const EllipseSpec& s) -> ConvexBody {
                   return Ellipsoid(s.center, rotated_ellipse_shape(s.semi_a, s.semi_b, s.angle));
                 },
                 [](const EllipsoidSpec& s) -> ConvexBody { return Ellipsoid(s.center, s.shape); },
                 [](const HalfspaceSpec& s) -> ConvexBody { return Halfspace(s.normal, s.offset); },
                 [](const BallSpec& s) -> ConvexBody { return Ball(s.center, s.radius); },
                 [](const BoxSpec& s) -> ConvexBody { return Box(s.lower, s.upper); }},
      spec);
}

void validate(const InstanceConfig& c) {
  if (c.name.empty()) throw ConfigError("name", "must not be empty");
  for (char ch : c.name) {
    const bool ok = std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-' || ch == '.';
    if (!ok) throw ConfigError("name", "may only contain letters, digits, '_', '-' and '.'");
  }
  if (c.dimension < 1) throw ConfigError("dimension", "must be positive");

  const ConvexBody a = checked_body(c.set_a, "set_a", c.dimension);
  const ConvexBody b = checked_body(c.set_b, "set_b", c.dimension);

  if (c.x0.size() != c.dimension) throw ConfigError("x0", "length does not match dimension");
  if (!c.x0.allFinite()) throw ConfigError("x0", "entries must be finite");
  if (violation(a, c.x0) > 1e-10) throw ConfigError("x0", "x0 is not a member of set_a");

  if (uses_y0(c.solver)) {
    if (!c.y0) throw ConfigError("y0", fmt::format("{} needs a starting point y0", to_string(c.solver)));
    if (c.y0->size() != c.dimension) throw ConfigError("y0", "length does not match dimension");
    if (!c.y0->allFinite()) throw ConfigError("y0", "entries must be finite");
    if (violation(b, *c.y0) > 1e-10) throw ConfigError("y0", "y0 is not a member of set_b");
  } else if (c.y0) {
    throw ConfigError("y0", fmt::format("{} does not take y0", to_string(c.solver)));
  }

  if (!is_exact(c.solver)) {
    if (!a.is_compact()) {
      throw ConfigError("set_a", fmt::format("{} needs a compact set_a", to_string(c.solver)));
    }
    if (c.solver != SolverKind::ACondG1 && !b.is_compact()) {
      throw ConfigError("set_b", fmt::format("{} needs a compact set_b", to_string(c.solver)));
    }
  }

  const ScheduleSpec& s = c.schedule;
  const std::pair<const char*, double> params[] = {
      {"schedule.gamma0", s.gamma0}, {"schedule.theta0", s.theta0}, {"schedule.lambda0", s.lambda0}};
  for (const auto& [field, value] : params) {
    if (!(value >= 0.0)) throw ConfigError(field, "must be nonnegative");
  }
  if (!(s.tau > 0.0 && s.tau < 1.0)) throw ConfigError("schedule.tau", "must lie in (0, 1)");
  if (!(s.delta > 0.0 && s.delta < 1.0)) throw ConfigError("schedule.delta", "must lie in (0, 1)");
  if (!is_exact(c.solver) &&
      !satisfies_regime({s.gamma0, s.theta0, s.lambda0}, regime_of(c.solver))) {
    throw ConfigError("schedule", fmt::format("forcing parameters violate the {} conditions of {}",
                                              to_string(regime_of(c.solver)), to_string(c.solver)));
  }

  if (!(c.stopping.eps_feas > 0.0)) throw ConfigError("stopping.eps_feas", "must be positive");
  if (!(c.stopping.eps_lack > 0.0)) throw ConfigError("stopping.eps_lack", "must be positive");
  if (c.stopping.max_outer_iters < 1) throw ConfigError("stopping.max_outer_iters", "must be positive");
  if (c.limits.max_inner_iters < 1) throw ConfigError("limits.max_inner_iters", "must be positive");
  if (!(c.limits.degenerate_gap_tol >= 0.0)) {
    throw ConfigError("limits.degenerate_gap_tol", "must be nonnegative");
  }
}

InstanceConfig parse_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& err) {
    throw ConfigError("$", fmt::format("malformed JSON: {}", err.what()));
  }
  if (!doc.is_object()) throw ConfigError("$", "expected a JSON object");
  reject_unknown_keys(doc, "", {"schema", "name", "dimension", "set_a", "set_b", "x0", "y0", "solver",
                                "schedule", "stopping", "limits", "seed"});

  const std::string schema = read_string(member(doc, "", "schema"), "schema");
  if (schema != kConfigSchema) {
    throw ConfigError("schema", fmt::format("unsupported schema '{}' (expected '{}')", schema, kConfigSchema));
  }

  InstanceConfig c;
  if (const json* n = optional_member(doc, "name")) c.name = read_string(*n, "name");
  const long long dim = read_integer(member(doc, "", "dimension"), "dimension");
  if (dim < 1 || dim > 1'000'000) throw ConfigError("dimension", "must be positive");
  c.dimension = static_cast<int>(dim);
  c.set_a = read_body(member(doc, "", "set_a"), "set_a");
  c.set_b = read_body(member(doc, "", "set_b"), "set_b");
  c.x0 = read_vector(member(doc, "", "x0"), "x0");
  if (const json* y = optional_member(doc, "y0")) c.y0 = read_vector(*y, "y0");

  const std::string solver = read_string(member(doc, "", "solver"), "solver");
  const auto kind = parse_solver(solver);
  if (!kind) {
    throw ConfigError("solver", fmt::format("unknown solver '{}' (ACondG1, ACondG2, Averaged, "
                                            "ExactAlt1, ExactAlt2)", solver));
  }
  c.solver = *kind;

  if (const json* s = optional_member(doc, "schedule")) {
    if (!s->is_object()) throw ConfigError("schedule", "expected an object");
    reject_unknown_keys(*s, "schedule", {"gamma0", "theta0", "lambda0", "tau", "delta"});
    auto get = [&](const char* key, double& out) {
      if (const json* v = optional_member(*s, key)) out = read_number(*v, join("schedule", key));
    };
    get("gamma0", c.schedule.gamma0);
    get("theta0", c.schedule.theta0);
    get("lambda0", c.schedule.lambda0);
    get("tau", c.schedule.tau);
    get("delta", c.schedule.delta);
  }
  if (const json* s = optional_member(doc, "stopping")) {
    if (!s->is_object()) throw ConfigError("stopping", "expected an object");
    reject_unknown_keys(*s, "stopping", {"eps_feas", "eps_lack", "max_outer_iters"});
    if (const json* v = optional_member(*s, "eps_feas")) c.stopping.eps_feas = read_number(*v, "stopping.eps_feas");
    if (const json* v = optional_member(*s, "eps_lack")) c.stopping.eps_lack = read_number(*v, "stopping.eps_lack");
    if (const json* v = optional_member(*s, "max_outer_iters")) {
      const long long n = read_integer(*v, "stopping.max_outer_iters");
      if (n < 1 || n > 1'000'000'000) throw ConfigError("stopping.max_outer_iters", "out of range");
      c.stopping.max_outer_iters = static_cast<int>(n);
    }
  }
  if (const json* s = optional_member(doc, "limits")) {
    if (!s->is_object()) throw ConfigError("limits", "expected an object");
    reject_unknown_keys(*s, "limits", {"max_inner_iters", "degenerate_gap_tol"});
    if (const json* v = optional_member(*s, "max_inner_iters")) {
      const long long n = read_integer(*v, "limits.max_inner_iters");
      if (n < 1 || n > 1'000'000'000) throw ConfigError("limits.max_inner_iters", "out of range");
      c.limits.max_inner_iters = static_cast<int>(n);
    }
    if (const json* v = optional_member(*s, "degenerate_gap_tol")) {
      c.limits.degenerate_gap_tol = read_number(*v, "limits.degenerate_gap_tol");
    }
  }
  if (const json* s = optional_member(doc, "seed")) {
    if (!s->is_number_unsigned()) throw ConfigError("seed", "expected a nonnegative integer");
    c.seed = s->get<std::uint64_t>();
  }

  validate(c);
  return c;
}

InstanceConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("$", fmt::format("cannot read config file '{}'", path.string()));
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string serialize_config(const InstanceConfig& c) {
  json doc = json::object();
  doc["schema"] = kConfigSchema;
  doc["name"] = c.name;
  doc["dimension"] = c.dimension;
  doc["set_a"] = write_body(c.set_a);
  doc["set_b"] = write_body(c.set_b);
  doc["x0"] = write_vector(c.x0);
  if (c.y0) doc["y0"] = write_vector(*c.y0);
  doc["solver"] = std::string(to_string(c.solver));
  doc["schedule"] = {{"gamma0", c.schedule.gamma0},
                     {"theta0", c.schedule.theta0},
                     {"lambda0", c.schedule.lambda0},
                     {"tau", c.schedule.tau},
                     {"delta", c.schedule.delta}};
  doc["stopping"] = {{"eps_feas", c.stopping.eps_feas},
                     {"eps_lack", c.stopping.eps_lack},
                     {"max_outer_iters", c.stopping.max_outer_iters}};
  doc["limits"] = {{"max_inner_iters", c.limits.max_inner_iters},
                   {"degenerate_gap_tol", c.limits.degenerate_gap_tol}};
  if (c.seed) doc["seed"] = *c.seed;
  return doc.dump(2) + "\n";
}

ForcingSchedule make_schedule(const InstanceConfig& c) {
  const ScheduleSpec& s = c.schedule;
  return ForcingSchedule({s.gamma0, s.theta0, s.lambda0}, s.tau, s.delta, regime_of(c.solver));
}

EllipseSpec experiment_ellipse_a() {
  return EllipseSpec{Vector::Zero(2), -std::numbers::pi / 4.0, 2.0, 0.2};
}

InstanceConfig table1_instance(double beta, SolverKind solver) {
  InstanceConfig c;
  c.name = fmt::format("table1-beta{}-{}", beta, to_string(solver));
  c.set_a = experiment_ellipse_a();
  Vector normal(2);
  normal << -1.0, 0.0;
  c.set_b = HalfspaceSpec{normal, -beta};
  c.x0 = Vector::Zero(2);
  c.solver = solver;
  return c;
}

InstanceConfig table2_instance(double shift, SolverKind solver) {
  InstanceConfig c;
  c.name = fmt::format("table2-shift{}-{}", shift, to_string(solver));
  c.set_a = experiment_ellipse_a();
  Vector center(2);
  center << shift, 0.5;
  c.set_b = EllipseSpec{center, std::numbers::pi / 3.0, 2.0, 0.4};
  c.x0 = Vector::Zero(2);
  c.y0 = center;
  c.solver = solver;
  return c;
}

}  // namespace feasib::experiment
