#include <CLI11.hpp>

#include "imitodyn/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"imitodyn: stochastic imitation dynamics on potential population games"};
  app.require_subcommand(1);

  imitodyn::CommandOptions opts;
  std::string config, out;
  std::uint64_t seed = 0;
  std::size_t runs = 0;

  struct Sub {
    const char* name;
    const char* help;
    int (*fn)(const imitodyn::CommandOptions&);
  };
  const Sub subs[] = {
      {"simulate", "Run a seeded ensemble and write trajectory CSVs plus summary.json", imitodyn::cmd_simulate},
      {"ode", "Integrate the mean-field ODE and locate its limit", imitodyn::cmd_ode},
      {"landscape", "Find and classify critical points of the potential", imitodyn::cmd_landscape},
      {"metastability", "Absorption, time-near-ESS and exit-time report over an n-sweep",
       imitodyn::cmd_metastability},
      {"compare", "Stochastic vs mean-field deviation per run and per n", imitodyn::cmd_compare},
  };
  int (*chosen)(const imitodyn::CommandOptions&) = nullptr;
  for (const auto& s : subs) {
    auto* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("--config", config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "Override ensemble.base_seed");
    sub->add_option("--out", out, "Override output_dir");
    sub->add_option("--runs", runs, "Override ensemble.runs");
    sub->callback([&chosen, fn = s.fn] { chosen = fn; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  opts.config = config;
  if (app.get_subcommands().front()->count("--seed")) opts.seed = seed;
  if (app.get_subcommands().front()->count("--out")) opts.out = out;
  if (app.get_subcommands().front()->count("--runs")) opts.runs = runs;
  return chosen(opts);
}
