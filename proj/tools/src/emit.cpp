#include "paoi/emit.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "paoi/opt.hpp"

namespace paoi::cli {

using nlohmann::json;

namespace {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    default: return "info";
  }
}

json number_value(double v, int precision) {
  if (!std::isfinite(v)) return format_number(v, precision);
  return std::stod(format_number(v, precision));
}

std::string scalar_text(const Scalar& s, int precision) {
  return std::visit(
      [precision](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) return format_number(v, precision);
        else if constexpr (std::is_same_v<T, std::uint64_t>) return std::to_string(v);
        else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        else return v;
      },
      s);
}

json scalar_json(const Scalar& s, int precision) {
  return std::visit(
      [precision](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) return number_value(v, precision);
        else return v;
      },
      s);
}

// Quotes a delimited field only when it needs it.
std::string field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

}  // namespace

bool ResultRecord::failed() const {
  for (const auto& c : checks)
    if (c.verdict == Verdict::Fail) return true;
  return false;
}

std::string format_number(double v, int precision) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

void emit_table(std::ostream& out, const ResultRecord& rec, int precision) {
  const auto num = [precision](double v) { return format_number(v, precision); };
  if (!rec.rows.empty()) {
    out << "class_id,rate,mean_service,second_moment_service,paoi_analytic,paoi_sim,paoi_sim_halfwidth,cost\n";
    for (const auto& r : rec.rows) {
      out << r.class_id << ',' << num(r.rate) << ',' << num(r.mean_service) << ',' << num(r.second_moment_service)
          << ',' << num(r.paoi_analytic) << ',' << num(r.paoi_sim) << ',' << num(r.paoi_sim_halfwidth) << ','
          << num(r.cost) << '\n';
    }
    out << '\n';
  }
  if (!rec.checks.empty()) {
    out << "check,computed,reference,delta,tolerance,verdict\n";
    for (const auto& c : rec.checks) {
      out << field(c.name) << ',' << num(c.computed) << ',' << num(c.reference) << ','
          << num(c.computed - c.reference) << ',' << num(c.tolerance) << ',' << verdict_name(c.verdict) << '\n';
    }
    out << '\n';
  }
  out << "key,value\n";
  out << "scenario," << field(rec.scenario_id) << '\n';
  out << "subcommand," << rec.subcommand << '\n';
  out << "version," << rec.version << '\n';
  if (rec.seed) out << "seed," << *rec.seed << '\n';
  if (!rec.timestamp.empty()) out << "timestamp," << rec.timestamp << '\n';
  for (const auto& [k, v] : rec.scalars) out << field(k) << ',' << field(scalar_text(v, precision)) << '\n';
}

json to_json(const ResultRecord& rec, int precision) {
  json doc;
  doc["scenario"] = rec.scenario_id;
  doc["subcommand"] = rec.subcommand;
  doc["version"] = rec.version;
  if (rec.seed) doc["seed"] = *rec.seed;
  if (!rec.timestamp.empty()) doc["timestamp"] = rec.timestamp;
  doc["config"] = rec.config;
  json rows = json::array();
  for (const auto& r : rec.rows) {
    rows.push_back({{"class_id", r.class_id},
                    {"rate", number_value(r.rate, precision)},
                    {"mean_service", number_value(r.mean_service, precision)},
                    {"second_moment_service", number_value(r.second_moment_service, precision)},
                    {"paoi_analytic", number_value(r.paoi_analytic, precision)},
                    {"paoi_sim", number_value(r.paoi_sim, precision)},
                    {"paoi_sim_halfwidth", number_value(r.paoi_sim_halfwidth, precision)},
                    {"cost", number_value(r.cost, precision)}});
  }
  doc["classes"] = std::move(rows);
  json scalars = json::object();
  for (const auto& [k, v] : rec.scalars) scalars[k] = scalar_json(v, precision);
  doc["scalars"] = std::move(scalars);
  json checks = json::array();
  for (const auto& c : rec.checks) {
    checks.push_back({{"name", c.name},
                      {"computed", number_value(c.computed, precision)},
                      {"reference", number_value(c.reference, precision)},
                      {"delta", number_value(c.computed - c.reference, precision)},
                      {"tolerance", number_value(c.tolerance, precision)},
                      {"verdict", verdict_name(c.verdict)}});
  }
  doc["checks"] = std::move(checks);
  return doc;
}

void emit_object(std::ostream& out, const ResultRecord& rec, int precision) {
  out << to_json(rec, precision).dump(2) << '\n';
}

void emit_cost_surface(std::ostream& out, const SystemModel& model, std::size_t points, int precision) {
  if (model.size() != 2) throw std::invalid_argument("cost surface export needs exactly two classes");
  if (points < 2) throw std::invalid_argument("cost surface needs at least two points per axis");
  const double lo = model.box().min(), hi = model.box().max();
  const auto at = [&](std::size_t i) {
    return i + 1 == points ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  };
  out << "lambda_1,lambda_2,sys_cost\n";
  for (std::size_t i = 0; i < points; ++i) {
    for (std::size_t j = 0; j < points; ++j) {
      const double l1 = at(i), l2 = at(j);
      const auto c = system_cost(model, RateVector({l1, l2}));
      out << format_number(l1, precision) << ',' << format_number(l2, precision) << ','
          << (c.unstable ? std::string("inf") : format_number(c.cost, precision)) << '\n';
    }
  }
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

}  // namespace paoi::cli
