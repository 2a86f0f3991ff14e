#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "feasib/solvers.hpp"

namespace feasib::experiment {

inline constexpr std::string_view kConfigSchema = "feasib-instance/1";

/// Config problem tied to a location in the document, e.g. "set_a.semi_axes[1]".
class ConfigError : public InvalidInput {
 public:
  ConfigError(std::string field, const std::string& message);

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// 2D ellipse by center, rotation angle (radians) and semi-axes (a, b).
struct EllipseSpec {
  Vector center;
  double angle = 0.0;
  double semi_a = 1.0;
  double semi_b = 1.0;
};

struct EllipsoidSpec {
  Vector center;
  Matrix shape;
};

struct HalfspaceSpec {
  Vector normal;
  double offset = 0.0;
};

struct BallSpec {
  Vector center;
  double radius = 1.0;
};

struct BoxSpec {
  Vector lower;
  Vector upper;
};

using BodySpec = std::variant<EllipseSpec, EllipsoidSpec, HalfspaceSpec, BallSpec, BoxSpec>;

enum class SolverKind { ACondG1, ACondG2, Averaged, ExactAlt1, ExactAlt2 };

std::string_view to_string(SolverKind solver);
std::optional<SolverKind> parse_solver(std::string_view name);

struct ScheduleSpec {
  double gamma0 = 0.1 - 1e-8;
  double theta0 = 0.2 - 1e-8;
  double lambda0 = 0.2 - 1e-8;
  double tau = 0.9;
  double delta = 0.1;
};

struct InstanceConfig {
  std::string name = "instance";
  int dimension = 2;
  BodySpec set_a;
  BodySpec set_b;
  Vector x0;
  std::optional<Vector> y0;
  SolverKind solver = SolverKind::ACondG1;
  ScheduleSpec schedule;
  StoppingConfig stopping;
  CondGLimits limits;
  std::optional<std::uint64_t> seed;
};

bool operator==(const BodySpec& a, const BodySpec& b);
bool operator==(const InstanceConfig& a, const InstanceConfig& b);

ConvexBody build_body(const BodySpec& spec);

/// Semantic checks, run before any computation: dimensions, body parameters, starting
/// points inside their sets, solver/body compatibility and the forcing regime of the
/// solver. Throws ConfigError.
void validate(const InstanceConfig& config);

/// Parses and validates a JSON document. Throws ConfigError.
InstanceConfig parse_config(std::string_view json_text);
InstanceConfig load_config(const std::filesystem::path& path);

/// Pretty-printed JSON; parse_config(serialize_config(c)) == c.
std::string serialize_config(const InstanceConfig& config);

/// The forcing schedule of the config in the regime its solver requires.
ForcingSchedule make_schedule(const InstanceConfig& config);

/// Ellipse A shared by both experiment families: center 0, angle -pi/4, semi-axes 2, 1/5.
EllipseSpec experiment_ellipse_a();

/// Ellipse A against the halfspace -[z]_1 + beta <= 0, started at the center of A.
InstanceConfig table1_instance(double beta, SolverKind solver);

/// Ellipse A against the ellipse centered at (shift, 0.5) with angle pi/3 and semi-axes
/// 2, 2/5, started at the two centers.
InstanceConfig table2_instance(double shift, SolverKind solver);

}  // namespace feasib::experiment
