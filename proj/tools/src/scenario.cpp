#include "paoi/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <type_traits>

namespace paoi::cli {

using nlohmann::json;

ScenarioError::ScenarioError(std::string where, const std::string& what)
    : std::runtime_error((where.empty() ? std::string("/") : where) + ": " + what), where_(std::move(where)) {}

namespace {

// Cursor into the document that knows its JSON pointer.
class Node {
 public:
  Node(const json& value, std::string where) : value_(value), where_(std::move(where)) {}

  const json& value() const { return value_; }
  const std::string& where() const { return where_; }

  [[noreturn]] void fail(const std::string& what) const { throw ScenarioError(where_, what); }

  void expect_object(std::initializer_list<const char*> allowed) const {
    if (!value_.is_object()) fail("expected an object");
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& [k, v] : value_.items()) {
      if (!keys.count(k)) Node(v, child_path(k)).fail("unknown field '" + k + "'");
    }
  }

  bool has(const std::string& key) const { return value_.contains(key); }

  Node at(const std::string& key) const {
    if (!value_.contains(key)) fail("missing required field '" + key + "'");
    return Node(value_.at(key), child_path(key));
  }

  Node at(std::size_t index) const { return Node(value_.at(index), where_ + "/" + std::to_string(index)); }

  double number() const {
    if (!value_.is_number()) fail("expected a number");
    return value_.get<double>();
  }

  std::uint64_t count() const {
    if (value_.is_number_unsigned()) return value_.get<std::uint64_t>();
    if (!value_.is_number_integer() || value_.get<std::int64_t>() < 0) fail("expected a non-negative integer");
    return static_cast<std::uint64_t>(value_.get<std::int64_t>());
  }

  bool boolean() const {
    if (!value_.is_boolean()) fail("expected true or false");
    return value_.get<bool>();
  }

  std::string string() const {
    if (!value_.is_string()) fail("expected a string");
    return value_.get<std::string>();
  }

  std::vector<double> numbers() const {
    if (!value_.is_array()) fail("expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < value_.size(); ++i) out.push_back(at(i).number());
    return out;
  }

  std::size_t array_size() const {
    if (!value_.is_array()) fail("expected an array");
    return value_.size();
  }

 private:
  std::string child_path(const std::string& key) const {
    std::string escaped;
    for (char c : key) {
      if (c == '~') escaped += "~0";
      else if (c == '/') escaped += "~1";
      else escaped += c;
    }
    return where_ + "/" + escaped;
  }

  const json& value_;
  std::string where_;
};

// Runs a core constructor and re-labels its validation error with the location.
template <class F>
auto guarded(const Node& node, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    node.fail(e.what());
  }
}

ServiceDistribution parse_service(const Node& n) {
  if (!n.value().is_object()) n.fail("expected an object");
  const auto type = n.at("type").string();
  if (type == "exponential") {
    n.expect_object({"type", "rate"});
    return guarded(n, [&] { return ServiceDistribution::exponential(n.at("rate").number()); });
  }
  if (type == "deterministic") {
    n.expect_object({"type", "value"});
    return guarded(n, [&] { return ServiceDistribution::deterministic(n.at("value").number()); });
  }
  if (type == "uniform") {
    n.expect_object({"type", "low", "high"});
    return guarded(n, [&] { return ServiceDistribution::uniform(n.at("low").number(), n.at("high").number()); });
  }
  if (type == "gamma") {
    n.expect_object({"type", "shape", "scale"});
    return guarded(n, [&] { return ServiceDistribution::gamma(n.at("shape").number(), n.at("scale").number()); });
  }
  if (type == "hyperexponential") {
    n.expect_object({"type", "weights", "rates"});
    return guarded(n, [&] {
      return ServiceDistribution::hyperexponential(n.at("weights").numbers(), n.at("rates").numbers());
    });
  }
  n.at("type").fail("unknown service type '" + type +
                    "' (expected exponential, deterministic, uniform, gamma or hyperexponential)");
}

CostFunction parse_cost(const Node& n) {
  if (!n.value().is_object()) n.fail("expected an object");
  const auto type = n.at("type").string();
  if (type == "linear") {
    n.expect_object({"type", "weight"});
    return guarded(n, [&] { return CostFunction::linear(n.at("weight").number()); });
  }
  if (type == "power") {
    n.expect_object({"type", "weight", "exponent"});
    return guarded(n, [&] { return CostFunction::power(n.at("weight").number(), n.at("exponent").number()); });
  }
  if (type == "piecewise_linear") {
    n.expect_object({"type", "breakpoints", "slopes"});
    return guarded(n, [&] {
      return CostFunction::piecewise_linear(n.at("breakpoints").numbers(), n.at("slopes").numbers());
    });
  }
  n.at("type").fail("unknown cost type '" + type + "' (expected linear, power or piecewise_linear)");
}

void parse_sim(const Node& n, SimConfig& sim) {
  n.expect_object({"horizon", "warmup_fraction", "replications", "seed", "arrivals"});
  if (n.has("horizon")) sim.horizon = n.at("horizon").number();
  if (n.has("warmup_fraction")) sim.warmup_fraction = n.at("warmup_fraction").number();
  if (n.has("replications")) sim.replications = n.at("replications").count();
  if (n.has("seed")) sim.seed = n.at("seed").count();
  if (n.has("arrivals")) {
    const auto a = n.at("arrivals");
    const auto s = a.string();
    if (s == "poisson") sim.arrivals = ArrivalProcess::Poisson;
    else if (s == "periodic") sim.arrivals = ArrivalProcess::Periodic;
    else a.fail("unknown arrival process '" + s + "' (expected poisson or periodic)");
  }
  guarded(n, [&] { sim.validate(); });
}

void parse_opt(const Node& n, BisectionSettings& b, GridSettings& g) {
  n.expect_object({"epsilon", "max_iterations", "fixed_point_tol", "fixed_point_max_iters", "grid_points",
                   "grid_refine", "grid_refine_window"});
  if (n.has("epsilon")) b.epsilon = n.at("epsilon").number();
  if (n.has("max_iterations")) b.max_iterations = n.at("max_iterations").count();
  if (n.has("fixed_point_tol")) b.fixed_point_tol = n.at("fixed_point_tol").number();
  if (n.has("fixed_point_max_iters")) b.fixed_point_max_iters = n.at("fixed_point_max_iters").count();
  if (n.has("grid_points")) g.points_per_dimension = n.at("grid_points").count();
  if (n.has("grid_refine")) g.refine = n.at("grid_refine").boolean();
  if (n.has("grid_refine_window")) g.refine_window = n.at("grid_refine_window").count();
  guarded(n, [&] {
    b.validate();
    g.validate();
  });
}

void parse_output(const Node& n, OutputSettings& o) {
  n.expect_object({"format", "precision", "timestamp"});
  if (n.has("format")) {
    const auto f = n.at("format");
    guarded(f, [&] { o.format = format_from_string(f.string()); });
  }
  if (n.has("precision")) {
    const auto p = n.at("precision");
    const auto v = p.count();
    if (v < 1 || v > 17) p.fail("precision must be between 1 and 17");
    o.precision = static_cast<int>(v);
  }
  if (n.has("timestamp")) o.timestamp = n.at("timestamp").boolean();
}

}  // namespace

OutputFormat format_from_string(const std::string& s) {
  if (s == "table") return OutputFormat::Table;
  if (s == "object") return OutputFormat::Object;
  throw std::invalid_argument("unknown format '" + s + "' (expected table or object)");
}

std::string to_string(OutputFormat f) { return f == OutputFormat::Table ? "table" : "object"; }

ScenarioConfig parse_scenario(const json& doc) {
  const Node root(doc, "");
  root.expect_object({"id", "system", "sim", "opt", "output"});

  const auto sys = root.at("system");
  sys.expect_object({"discipline", "rate_box", "classes"});
  const auto disc_node = sys.at("discipline");
  const auto discipline = guarded(disc_node, [&] { return discipline_from_string(disc_node.string()); });

  const auto box_node = sys.at("rate_box");
  box_node.expect_object({"min", "max"});
  const auto box = guarded(box_node, [&] { return RateBox(box_node.at("min").number(), box_node.at("max").number()); });

  const auto classes = sys.at("classes");
  const std::size_t n = classes.array_size();
  if (n == 0) classes.fail("at least one class is required");
  std::vector<ServiceDistribution> services;
  std::vector<CostFunction> costs;
  std::vector<double> rates;
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = classes.at(i);
    c.expect_object({"service", "cost", "rate"});
    services.push_back(parse_service(c.at("service")));
    costs.push_back(parse_cost(c.at("cost")));
    if (c.has("rate")) {
      const auto r = c.at("rate");
      const double v = r.number();
      if (!(v > 0.0) || !box.contains(v)) r.fail("rate must lie inside the rate box");
      rates.push_back(v);
    }
  }
  if (!rates.empty() && rates.size() != n) classes.fail("either every class or no class sets 'rate'");

  ScenarioConfig cfg{SystemModel::make(std::move(services), std::move(costs), box, discipline)};
  if (!rates.empty()) cfg.rates = RateVector(std::move(rates));
  if (root.has("id")) cfg.id = root.at("id").string();
  if (root.has("sim")) parse_sim(root.at("sim"), cfg.sim);
  if (root.has("opt")) parse_opt(root.at("opt"), cfg.bisection, cfg.grid);
  if (root.has("output")) parse_output(root.at("output"), cfg.output);
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("", "cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ScenarioError("", std::string("malformed JSON in '") + path + "': " + e.what());
  }
  return parse_scenario(doc);
}

json to_json(const ServiceDistribution& dist) {
  return std::visit(
      [](const auto& p) -> json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ServiceDistribution::Exponential>) {
          return {{"type", "exponential"}, {"rate", p.rate}};
        } else if constexpr (std::is_same_v<T, ServiceDistribution::Deterministic>) {
          return {{"type", "deterministic"}, {"value", p.value}};
        } else if constexpr (std::is_same_v<T, ServiceDistribution::Uniform>) {
          return {{"type", "uniform"}, {"low", p.low}, {"high", p.high}};
        } else if constexpr (std::is_same_v<T, ServiceDistribution::Gamma>) {
          return {{"type", "gamma"}, {"shape", p.shape}, {"scale", p.scale}};
        } else {
          return {{"type", "hyperexponential"}, {"weights", p.weights}, {"rates", p.rates}};
        }
      },
      dist.params());
}

json to_json(const CostFunction& cost) {
  return std::visit(
      [](const auto& p) -> json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, CostFunction::Linear>) {
          return {{"type", "linear"}, {"weight", p.weight}};
        } else if constexpr (std::is_same_v<T, CostFunction::Power>) {
          return {{"type", "power"}, {"weight", p.weight}, {"exponent", p.exponent}};
        } else {
          return {{"type", "piecewise_linear"}, {"breakpoints", p.breakpoints}, {"slopes", p.slopes}};
        }
      },
      cost.params());
}

json to_json(const ScenarioConfig& cfg) {
  json classes = json::array();
  for (std::size_t i = 0; i < cfg.model.size(); ++i) {
    json c = {{"service", to_json(cfg.model.entity(i).service)}, {"cost", to_json(cfg.model.entity(i).cost)}};
    if (cfg.rates) c["rate"] = (*cfg.rates)[i];
    classes.push_back(std::move(c));
  }
  return {
      {"id", cfg.id},
      {"system",
       {{"discipline", std::string(to_string(cfg.model.discipline()))},
        {"rate_box", {{"min", cfg.model.box().min()}, {"max", cfg.model.box().max()}}},
        {"classes", std::move(classes)}}},
      {"sim",
       {{"horizon", cfg.sim.horizon},
        {"warmup_fraction", cfg.sim.warmup_fraction},
        {"replications", cfg.sim.replications},
        {"seed", cfg.sim.seed},
        {"arrivals", cfg.sim.arrivals == ArrivalProcess::Poisson ? "poisson" : "periodic"}}},
      {"opt",
       {{"epsilon", cfg.bisection.epsilon},
        {"max_iterations", cfg.bisection.max_iterations},
        {"fixed_point_tol", cfg.bisection.fixed_point_tol},
        {"fixed_point_max_iters", cfg.bisection.fixed_point_max_iters},
        {"grid_points", cfg.grid.points_per_dimension},
        {"grid_refine", cfg.grid.refine},
        {"grid_refine_window", cfg.grid.refine_window}}},
      {"output",
       {{"format", to_string(cfg.output.format)},
        {"precision", cfg.output.precision},
        {"timestamp", cfg.output.timestamp}}},
  };
}

ScenarioConfig two_class_example(Discipline d) {
  ScenarioConfig cfg{SystemModel::make({ServiceDistribution::deterministic(1.0), ServiceDistribution::deterministic(3.0)},
                                       {CostFunction::power(4.0, 2.0), CostFunction::power(1.0, 2.0)},
                                       RateBox(0.01, 10.0), d)};
  cfg.id = d == Discipline::MG11 ? "two_class_mg11" : "two_class_mg1";
  cfg.rates = d == Discipline::MG11 ? RateVector({10.0, 6.0}) : RateVector({0.29, 0.125});
  return cfg;
}

}  // namespace paoi::cli
