#pragma once

#include <json.hpp>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "paoi/model.hpp"

namespace paoi::cli {

inline constexpr double kNotComputed = std::numeric_limits<double>::quiet_NaN();

struct ClassRow {
  std::size_t class_id = 0;
  double rate = kNotComputed;
  double mean_service = kNotComputed;
  double second_moment_service = kNotComputed;
  double paoi_analytic = kNotComputed;
  double paoi_sim = kNotComputed;
  double paoi_sim_halfwidth = kNotComputed;
  double cost = kNotComputed;
};

enum class Verdict { Pass, Fail, Info };

/// One verification line: computed against a reference with a tolerance.
struct Check {
  std::string name;
  double computed = kNotComputed;
  double reference = kNotComputed;
  double tolerance = kNotComputed;
  Verdict verdict = Verdict::Info;
};

using Scalar = std::variant<double, std::uint64_t, std::string, bool>;

struct ResultRecord {
  std::string scenario_id;
  std::string subcommand;
  std::vector<ClassRow> rows;
  std::vector<std::pair<std::string, Scalar>> scalars;
  std::vector<Check> checks;
  std::optional<std::uint64_t> seed;
  std::string version;
  std::string timestamp;  // empty when suppressed
  nlohmann::json config;

  bool failed() const;
};

/// General-format number with `precision` significant digits; inf, -inf, nan spelled out.
std::string format_number(double v, int precision);

void emit_table(std::ostream& out, const ResultRecord& rec, int precision);
nlohmann::json to_json(const ResultRecord& rec, int precision);
void emit_object(std::ostream& out, const ResultRecord& rec, int precision);

/// lambda_1,lambda_2,sys_cost over a uniform grid of the box for a two-class model.
/// Unstable points are written as "inf".
void emit_cost_surface(std::ostream& out, const SystemModel& model, std::size_t points, int precision);

/// ISO-8601 UTC time of the call.
std::string utc_timestamp();

}  // namespace paoi::cli
