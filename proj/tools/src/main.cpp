#include <CLI11.hpp>
#include <iostream>

#include "paoi/commands.hpp"

int main(int argc, char** argv) {
  using namespace paoi::cli;

  CLI::App app{"Peak age-of-information analysis, simulation and rate optimization"};
  app.require_subcommand(1);
  app.set_version_flag("--version", PAOI_VERSION);

  RunOptions opts;
  std::string format;
  std::uint64_t seed = 0;
  std::string out_dir;
  int precision = 0;
  double tolerance = 0.0;

  const auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* c = sub->add_option("--config", opts.config_path, "Scenario JSON file");
    if (config_required) c->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "Override sim.seed");
    sub->add_option("--out", out_dir, "Write results into this directory instead of stdout");
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"table", "object"}));
    sub->add_option("--precision", precision, "Significant digits in numeric output")->check(CLI::Range(1, 17));
    sub->add_flag("--no-timestamp", opts.no_timestamp, "Omit the timestamp field");
  };

  auto* analytic = app.add_subcommand("analytic", "Closed-form peak ages and identities at the configured rates");
  add_common(analytic, true);
  auto* simulate = app.add_subcommand("simulate", "Discrete-event estimate of peak and average ages");
  add_common(simulate, true);
  auto* optimize = app.add_subcommand("optimize", "Min-max cost update rates");
  add_common(optimize, true);
  optimize->add_flag("--grid-oracle", opts.grid_oracle, "Also run the exhaustive grid search");
  auto* verify = app.add_subcommand("verify", "Run the invariant battery; exit 3 on any failure");
  add_common(verify, true);
  verify->add_option("--tolerance", tolerance, "Relative residual tolerance")->check(CLI::NonNegativeNumber);
  auto* reproduce = app.add_subcommand("reproduce", "Compare the built-in two-class example to published values");
  add_common(reproduce, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInvalidInput;
  }

  for (auto* sub : app.get_subcommands()) {
    opts.subcommand = sub->get_name();
    if (sub->count("--seed")) opts.seed = seed;
    if (sub->count("--out")) opts.out_dir = out_dir;
    if (sub->count("--format")) opts.format = format_from_string(format);
    if (sub->count("--precision")) opts.precision = precision;
    if (sub->get_option_no_throw("--tolerance") && sub->count("--tolerance")) opts.tolerance = tolerance;
  }
  return run(opts, std::cout, std::cerr);
}
