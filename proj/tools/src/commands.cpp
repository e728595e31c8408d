#include "paoi/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "paoi/analytic.hpp"
#include "paoi/errors.hpp"
#include "paoi/opt.hpp"
#include "paoi/sim.hpp"

#ifndef PAOI_VERSION
#define PAOI_VERSION "unknown"
#endif

namespace paoi::cli {

namespace {

std::string class_key(const std::string& name, std::size_t index) {
  return name + ".class_" + std::to_string(index + 1);
}

const RateVector& require_rates(const ScenarioConfig& cfg) {
  if (!cfg.rates) throw ScenarioError("/system/classes", "this subcommand needs a 'rate' on every class");
  return *cfg.rates;
}

ResultRecord base_record(const ScenarioConfig& cfg, const std::string& sub) {
  ResultRecord rec;
  rec.scenario_id = cfg.id;
  rec.subcommand = sub;
  rec.version = PAOI_VERSION;
  rec.config = to_json(cfg);
  return rec;
}

std::vector<ClassRow> class_rows(const SystemModel& model, const RateVector& rates, const PaoiVector& ages) {
  std::vector<ClassRow> rows;
  for (std::size_t n = 0; n < model.size(); ++n) {
    ClassRow r;
    r.class_id = n + 1;
    r.rate = rates[n];
    r.mean_service = model.means()[n];
    r.second_moment_service = model.second_moments()[n];
    r.paoi_analytic = ages[n];
    r.cost = model.entity(n).cost.eval(ages[n]);
    rows.push_back(r);
  }
  return rows;
}

double max_abs(const std::vector<std::vector<double>>& m) {
  double worst = 0.0;
  for (const auto& row : m)
    for (double v : row) worst = std::max(worst, std::abs(v));
  return worst;
}

double weighted_age_sum(const RateVector& rates, const PaoiVector& ages) {
  double s = 0.0;
  for (std::size_t n = 0; n < rates.size(); ++n) s += rates[n] * ages[n];
  return s;
}

Check bound_check(std::string name, double computed, double reference, double tolerance) {
  const bool ok = std::abs(computed - reference) <= tolerance;
  return {std::move(name), computed, reference, tolerance, ok ? Verdict::Pass : Verdict::Fail};
}

Check info(std::string name, double computed, double reference) {
  return {std::move(name), computed, reference, kNotComputed, Verdict::Info};
}

void add_rates(ResultRecord& rec, const std::string& prefix, const RateVector& rates) {
  for (std::size_t n = 0; n < rates.size(); ++n) rec.scalars.emplace_back(class_key(prefix, n), rates[n]);
}

GridSettings grid_for(const ScenarioConfig& cfg) {
  GridSettings g = cfg.grid;
  // keep three-class grids tractable
  if (cfg.model.size() >= 3) g.points_per_dimension = std::min<std::size_t>(g.points_per_dimension, 100);
  return g;
}

}  // namespace

ResultRecord analytic_record(const ScenarioConfig& cfg) {
  const auto& model = cfg.model;
  const auto& rates = require_rates(cfg);
  auto rec = base_record(cfg, "analytic");
  const auto util = utilization(model, rates);
  if (model.discipline() == Discipline::MG1 && !util.stable) throw UnstableQueueError(util.rho);

  const auto ages = paoi(model, rates);
  rec.rows = class_rows(model, rates, ages);
  const auto sc = system_cost(model, rates);
  const auto cons = conservation_residual(model, rates, ages);

  rec.scalars.emplace_back("discipline", std::string(to_string(model.discipline())));
  rec.scalars.emplace_back("rho", util.rho);
  rec.scalars.emplace_back("load_second_moment", util.load_second_moment);
  if (util.stable) rec.scalars.emplace_back("waiting", util.waiting);
  rec.scalars.emplace_back("sys_cost", sc.cost);
  rec.scalars.emplace_back("argmax_class", static_cast<std::uint64_t>(sc.argmax + 1));
  rec.scalars.emplace_back("weighted_age_sum", weighted_age_sum(rates, ages));
  rec.scalars.emplace_back("conservation_residual",
                           model.discipline() == Discipline::MG1 ? cons.mg1 : cons.mg11);
  rec.scalars.emplace_back("pairwise_residual_max", max_abs(pairwise_relation_residual(model, rates, ages)));

  if (util.stable) {
    const auto gap = paoi_gap(model, rates);
    for (std::size_t n = 0; n < gap.size(); ++n) rec.scalars.emplace_back(class_key("paoi_gap_mg11_minus_mg1", n), gap[n]);
  }
  if (model.discipline() == Discipline::MG1) {
    const auto b = surrogate_paoi(model, rates);
    for (std::size_t n = 0; n < b.size(); ++n) rec.scalars.emplace_back(class_key("surrogate_paoi", n), b[n]);
    const auto* exp = std::get_if<ServiceDistribution::Exponential>(&model.entity(0).service.params());
    if (model.size() == 1 && exp) {
      const double aoi = aoi_mm1(rates[0], exp->rate);
      rec.scalars.emplace_back("aoi", aoi);
      rec.scalars.emplace_back("paoi_minus_aoi", ages[0] - aoi);
    }
  }
  return rec;
}

ResultRecord simulate_record(const ScenarioConfig& cfg) {
  const auto& model = cfg.model;
  const auto& rates = require_rates(cfg);
  auto rec = base_record(cfg, "simulate");
  rec.seed = cfg.sim.seed;
  const auto est = simulate(model, rates, cfg.sim);
  rec.rows = class_rows(model, rates, paoi(model, rates));
  for (std::size_t n = 0; n < model.size(); ++n) {
    rec.rows[n].paoi_sim = est.classes[n].paoi_mean;
    rec.rows[n].paoi_sim_halfwidth = est.classes[n].paoi_halfwidth;
  }
  rec.scalars.emplace_back("replications", static_cast<std::uint64_t>(est.replications));
  rec.scalars.emplace_back("horizon", est.horizon);
  rec.scalars.emplace_back("warmup_fraction", cfg.sim.warmup_fraction);
  for (std::size_t n = 0; n < model.size(); ++n) {
    const auto& c = est.classes[n];
    rec.scalars.emplace_back(class_key("aoi_sim", n), c.aoi_mean);
    rec.scalars.emplace_back(class_key("aoi_sim_halfwidth", n), c.aoi_halfwidth);
    rec.scalars.emplace_back(class_key("sojourn_sim", n), c.sojourn_mean);
    rec.scalars.emplace_back(class_key("delivered", n), static_cast<std::uint64_t>(c.delivered));
    rec.scalars.emplace_back(class_key("dropped", n), static_cast<std::uint64_t>(c.dropped));
  }
  return rec;
}

ResultRecord optimize_record(const ScenarioConfig& cfg, bool grid_oracle) {
  const auto& model = cfg.model;
  auto rec = base_record(cfg, "optimize");
  const auto result = optimize(model, cfg.bisection);
  const bool mg1 = model.discipline() == Discipline::MG1;
  rec.scalars.emplace_back("solver", std::string(mg1 ? "surrogate_bisection" : "bisection"));
  rec.scalars.emplace_back("status", std::string(result.optimal() ? "optimal" : "infeasible"));
  if (!result.optimal()) {
    rec.scalars.emplace_back("diagnostic", result.diagnostic);
    return rec;
  }
  rec.rows = class_rows(model, result.rates, result.paoi);
  rec.scalars.emplace_back("sys_cost", result.sys_cost);
  rec.scalars.emplace_back("argmax_class", static_cast<std::uint64_t>(result.argmax + 1));
  rec.scalars.emplace_back("iterations", static_cast<std::uint64_t>(result.iterations));
  if (mg1) rec.scalars.emplace_back("surrogate_cost", result.surrogate_cost);

  if (grid_oracle) {
    const auto grid = grid_search(model, grid_for(cfg));
    rec.scalars.emplace_back("grid.status", std::string(grid.optimal() ? "optimal" : "infeasible"));
    if (grid.optimal()) {
      add_rates(rec, "grid.rate", grid.rates);
      rec.scalars.emplace_back("grid.sys_cost", grid.sys_cost);
      rec.scalars.emplace_back("grid.evaluations", static_cast<std::uint64_t>(grid.iterations));
      if (mg1) {
        const auto gap = check_surrogate_gap(model, grid, result, 0.01);
        rec.scalars.emplace_back("gap.bound", gap.bound);
        rec.scalars.emplace_back("gap.ratio", gap.ratio);
        rec.scalars.emplace_back("gap.passed", gap.passed());
      } else {
        rec.scalars.emplace_back("grid.cost_minus_bisection", grid.sys_cost - result.sys_cost);
      }
    }
  }
  return rec;
}

ResultRecord verify_record(const ScenarioConfig& cfg, double tol) {
  const auto& model = cfg.model;
  const auto& rates = require_rates(cfg);
  auto rec = base_record(cfg, "verify");
  rec.seed = cfg.sim.seed;
  const bool mg1 = model.discipline() == Discipline::MG1;
  const auto util = utilization(model, rates);
  if (mg1 && !util.stable) throw UnstableQueueError(util.rho);

  const auto ages = paoi(model, rates);
  rec.rows = class_rows(model, rates, ages);
  const double scale = weighted_age_sum(rates, ages);
  const auto cons = conservation_residual(model, rates, ages);
  rec.checks.push_back(bound_check("conservation", (mg1 ? cons.mg1 : cons.mg11) / scale, 0.0, tol));

  double age_scale = 0.0;
  for (std::size_t n = 0; n < ages.size(); ++n) age_scale = std::max(age_scale, rates[n] * ages[n] + ages[n]);
  rec.checks.push_back(
      bound_check("pairwise_relations", max_abs(pairwise_relation_residual(model, rates, ages)) / age_scale, 0.0, tol));

  if (mg1) {
    const auto b = surrogate_paoi(model, rates);
    double worst = 0.0;
    for (std::size_t n = 0; n < b.size(); ++n)
      worst = std::max({worst, (ages[n] - b[n]) / ages[n], (b[n] - 2.0 * ages[n]) / ages[n]});
    rec.checks.push_back(bound_check("surrogate_sandwich", std::max(worst, 0.0), 0.0, tol));
  } else {
    const auto z = paoi_mg11_recursive(model, rates);
    double worst = 0.0;
    for (std::size_t n = 0; n < z.size(); ++n) worst = std::max(worst, std::abs(z[n] - ages[n]) / ages[n]);
    rec.checks.push_back(bound_check("completion_time_route", worst, 0.0, tol));
  }

  const auto log = capture_log(model, rates, cfg.sim, 0);
  for (std::size_t n = 0; n < model.size(); ++n) {
    const auto id = n + 1;
    const auto peak = estimate_peak_identity(log, id);
    rec.checks.push_back(
        bound_check(class_key("peak_identity", n), (peak.lhs - peak.rhs) / peak.lhs, 0.0, tol));
    const auto bounds = estimate_aoi_bounds(log, id);
    rec.checks.push_back({class_key("aoi_within_peak_bounds", n), bounds.aoi, kNotComputed, kNotComputed,
                          bounds.ordered() ? Verdict::Pass : Verdict::Fail});
    rec.scalars.emplace_back(class_key("aoi_bound_lower", n), bounds.lower);
    rec.scalars.emplace_back(class_key("aoi_empirical", n), bounds.aoi);
    rec.scalars.emplace_back(class_key("aoi_bound_upper", n), bounds.upper);
  }

  if (model.size() <= 3) {
    const auto grid = grid_search(model, grid_for(cfg));
    const auto best = optimize(model, cfg.bisection);
    if (grid.optimal() && best.optimal()) {
      if (mg1) {
        const auto gap = check_surrogate_gap(model, grid, best, 0.01);
        rec.checks.push_back({"surrogate_gap", gap.approx_cost, gap.exact_cost, gap.bound - gap.exact_cost,
                              gap.passed() ? Verdict::Pass : Verdict::Fail});
      } else {
        rec.checks.push_back(bound_check("bisection_vs_grid", best.sys_cost, grid.sys_cost,
                                         std::max(0.01 * grid.sys_cost, 1e-9)));
        const auto scaling = check_saturation_scaling(model, best.rates, 1e-9 * best.sys_cost);
        rec.checks.push_back({"saturation_scaling", scaling.scaled_cost, scaling.original_cost,
                              1e-9 * best.sys_cost, scaling.passed ? Verdict::Pass : Verdict::Fail});
      }
    } else {
      rec.checks.push_back({"optimizers_agree_on_feasibility", static_cast<double>(best.optimal()),
                            static_cast<double>(grid.optimal()), 0.0,
                            best.optimal() == grid.optimal() ? Verdict::Pass : Verdict::Fail});
    }
  }
  rec.scalars.emplace_back("tolerance", tol);
  rec.scalars.emplace_back("log_replication", static_cast<std::uint64_t>(0));
  return rec;
}

ResultRecord reproduce_record() {
  constexpr double kAgeTol = 0.02;
  constexpr double kCostRel = 0.01;
  const auto cost_check = [&](std::string name, double computed, double published) {
    return bound_check(std::move(name), computed, published, kCostRel * published);
  };

  const auto mg11_cfg = two_class_example(Discipline::MG11);
  const auto mg1_cfg = two_class_example(Discipline::MG1);
  ResultRecord rec = base_record(mg11_cfg, "reproduce");
  rec.scenario_id = "two_class_example";
  rec.config = {{"mg11", to_json(mg11_cfg)}, {"mg1", to_json(mg1_cfg)}};

  // bufferless optimum
  const auto& m11 = mg11_cfg.model;
  const auto r11 = optimize_mg11(m11);
  rec.checks.push_back(bound_check("mg11.lambda_1", r11.rates[0], 10.0, 0.05));
  rec.checks.push_back(bound_check("mg11.lambda_2", r11.rates[1], 6.0, 0.05));
  rec.checks.push_back(bound_check("mg11.paoi_1", r11.paoi[0], 3.9, kAgeTol));
  rec.checks.push_back(bound_check("mg11.paoi_2", r11.paoi[1], 7.83, kAgeTol));
  rec.checks.push_back(cost_check("mg11.sys_cost", r11.sys_cost, 61.36));
  const RateVector pub11({10.0, 6.0});
  const auto a11 = paoi(m11, pub11);
  rec.checks.push_back(bound_check("mg11.weighted_age_sum_at_published", weighted_age_sum(pub11, a11), 86.0, 0.005));
  rec.checks.push_back(info("mg11.sys_cost_at_published", system_cost(m11, pub11).cost, 61.36));

  // buffered exact optimum by grid
  const auto& m1 = mg1_cfg.model;
  const auto grid = grid_search(m1, mg1_cfg.grid);
  rec.checks.push_back(bound_check("mg1.grid.lambda_1", grid.rates[0], 0.29, 0.01));
  rec.checks.push_back(bound_check("mg1.grid.lambda_2", grid.rates[1], 0.125, 0.01));
  rec.checks.push_back(cost_check("mg1.grid.sys_cost", grid.sys_cost, 172.15));
  const RateVector pub1({0.29, 0.125});
  const auto a1 = paoi(m1, pub1);
  rec.checks.push_back(info("mg1.paoi_1_at_published", a1[0], kNotComputed));
  rec.checks.push_back(info("mg1.paoi_2_at_published", a1[1], kNotComputed));
  rec.checks.push_back(info("mg1.sys_cost_at_published", system_cost(m1, pub1).cost, 172.15));
  rec.checks.push_back(bound_check("mg1.weighted_age_sum_at_published", weighted_age_sum(pub1, a1), 3.541, 0.0005));

  // surrogate optimum
  const auto sur = optimize_mg1_surrogate(m1);
  rec.checks.push_back(bound_check("mg1.surrogate.lambda_1", sur.rates[0], 0.285, 0.01));
  rec.checks.push_back(bound_check("mg1.surrogate.lambda_2", sur.rates[1], 0.17, 0.01));
  rec.checks.push_back(bound_check("mg1.surrogate.paoi_1", sur.paoi[0], 8.94, kAgeTol));
  rec.checks.push_back(bound_check("mg1.surrogate.paoi_2", sur.paoi[1], 13.31, kAgeTol));
  rec.checks.push_back(cost_check("mg1.surrogate.sys_cost", sur.sys_cost, 319.69));
  const double ratio = sur.sys_cost / grid.sys_cost;
  rec.checks.push_back({"mg1.surrogate.cost_ratio_to_grid", ratio, 2.0, kNotComputed,
                        ratio <= 2.0 ? Verdict::Pass : Verdict::Fail});
  const RateVector pub_b({0.285, 0.17});
  const auto ab = paoi(m1, pub_b);
  rec.checks.push_back(info("mg1.surrogate.paoi_1_at_published", ab[0], 8.94));
  rec.checks.push_back(info("mg1.surrogate.paoi_2_at_published", ab[1], 13.31));
  rec.checks.push_back(info("mg1.surrogate.cost_1_at_published", m1.entity(0).cost.eval(ab[0]), 319.69));
  rec.checks.push_back(info("mg1.surrogate.cost_2_at_published", m1.entity(1).cost.eval(ab[1]), 177.16));

  add_rates(rec, "mg11.rate", r11.rates);
  add_rates(rec, "mg1.grid.rate", grid.rates);
  add_rates(rec, "mg1.surrogate.rate", sur.rates);
  rec.scalars.emplace_back("mg1.surrogate.surrogate_cost", sur.surrogate_cost);
  rec.scalars.emplace_back("age_tolerance", kAgeTol);
  rec.scalars.emplace_back("cost_relative_tolerance", kCostRel);
  return rec;
}

int run(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    const bool builtin = opts.config_path.empty();
    if (builtin && opts.subcommand != "reproduce") {
      err << "error: --config is required for " << opts.subcommand << '\n';
      return kExitInvalidInput;
    }
    ScenarioConfig cfg = builtin ? two_class_example(Discipline::MG11) : load_scenario(opts.config_path);
    if (opts.seed) cfg.sim.seed = *opts.seed;
    if (opts.format) cfg.output.format = *opts.format;
    if (opts.precision) {
      if (*opts.precision < 1 || *opts.precision > 17) {
        err << "error: --precision must be between 1 and 17\n";
        return kExitInvalidInput;
      }
      cfg.output.precision = *opts.precision;
    }
    if (opts.no_timestamp) cfg.output.timestamp = false;
    const double tol = opts.tolerance.value_or(kDefaultVerifyTolerance);
    if (!(tol >= 0.0)) {
      err << "error: --tolerance must be >= 0\n";
      return kExitInvalidInput;
    }

    ResultRecord rec;
    int code = kExitOk;
    if (opts.subcommand == "analytic") {
      rec = analytic_record(cfg);
    } else if (opts.subcommand == "simulate") {
      rec = simulate_record(cfg);
    } else if (opts.subcommand == "optimize") {
      rec = optimize_record(cfg, opts.grid_oracle);
      if (rec.rows.empty()) code = kExitInfeasible;
    } else if (opts.subcommand == "verify") {
      rec = verify_record(cfg, tol);
    } else if (opts.subcommand == "reproduce") {
      rec = reproduce_record();
    } else {
      err << "error: unknown subcommand '" << opts.subcommand << "'\n";
      return kExitInvalidInput;
    }
    if (rec.failed()) code = kExitCheckFailed;
    if (cfg.output.timestamp) rec.timestamp = utc_timestamp();

    const int precision = cfg.output.precision;
    const auto write = [&](std::ostream& os) {
      if (cfg.output.format == OutputFormat::Table) emit_table(os, rec, precision);
      else emit_object(os, rec, precision);
    };

    if (opts.out_dir) {
      namespace fs = std::filesystem;
      std::error_code ec;
      fs::create_directories(*opts.out_dir, ec);
      const fs::path path = fs::path(*opts.out_dir) / (rec.scenario_id + "_" + rec.subcommand +
                                                       (cfg.output.format == OutputFormat::Table ? ".csv" : ".json"));
      std::ofstream file(path);
      if (!file) {
        err << "error: cannot write " << path.string() << '\n';
        return kExitInvalidInput;
      }
      write(file);
      if (opts.subcommand == "optimize" && opts.grid_oracle && cfg.model.size() == 2) {
        const fs::path surface = fs::path(*opts.out_dir) / (rec.scenario_id + "_surface.csv");
        std::ofstream sf(surface);
        if (!sf) {
          err << "error: cannot write " << surface.string() << '\n';
          return kExitInvalidInput;
        }
        emit_cost_surface(sf, cfg.model, cfg.grid.points_per_dimension, precision);
      }
      if (!file || !out) {
        err << "error: failed writing " << path.string() << '\n';
        return kExitInvalidInput;
      }
      out << path.string() << '\n';
    } else {
      write(out);
    }
    for (const auto& c : rec.checks) {
      if (c.verdict == Verdict::Fail) err << "check failed: " << c.name << '\n';
    }
    if (code == kExitInfeasible) err << "optimization infeasible\n";
    return code;
  } catch (const ScenarioError& e) {
    err << "invalid config: " << e.what() << '\n';
  } catch (const UnstableQueueError& e) {
    err << "invalid config: " << e.what() << '\n';
  } catch (const InsufficientDataError& e) {
    err << "invalid config: " << e.what() << " (increase sim.horizon)\n";
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << '\n';
  }
  return kExitInvalidInput;
}

}  // namespace paoi::cli
