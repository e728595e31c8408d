#pragma once

#include <json.hpp>
#include <optional>
#include <stdexcept>
#include <string>

#include "paoi/model.hpp"
#include "paoi/opt.hpp"
#include "paoi/sim.hpp"

namespace paoi::cli {

/// Invalid scenario document. `where()` is a JSON pointer to the offending field.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string where, const std::string& what);
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

enum class OutputFormat { Table, Object };

struct OutputSettings {
  OutputFormat format = OutputFormat::Table;
  int precision = 6;
  bool timestamp = true;
};

struct ScenarioConfig {
  explicit ScenarioConfig(SystemModel m) : model(std::move(m)) {}

  SystemModel model;
  std::string id = "scenario";
  std::optional<RateVector> rates;  // required by analytic, simulate and verify
  SimConfig sim;
  BisectionSettings bisection;
  GridSettings grid;
  OutputSettings output;
};

ScenarioConfig parse_scenario(const nlohmann::json& doc);
ScenarioConfig load_scenario(const std::string& path);

nlohmann::json to_json(const ScenarioConfig& cfg);
nlohmann::json to_json(const ServiceDistribution& dist);
nlohmann::json to_json(const CostFunction& cost);

/// The two-class example: deterministic service (1, 3), costs 4A^2 and A^2,
/// rates in [0.01, 10].
ScenarioConfig two_class_example(Discipline d);

OutputFormat format_from_string(const std::string& s);
std::string to_string(OutputFormat f);

}  // namespace paoi::cli
