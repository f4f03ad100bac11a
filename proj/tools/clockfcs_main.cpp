#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "clockfcs/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "Asymptotic SNR of jump currents in Markovian ticking clockworks: "
      "exact counting statistics, feedback composition, kinetic and feedback "
      "bounds, and a trajectory cross-check."};
  app.require_subcommand(1);

  std::string config;
  clockfcs::RunOverrides flags;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("-c,--config", config, "JSON run configuration file");
    cmd->add_option("-o,--out", flags.out,
                    "CSV output path (default: <command>.csv)");
    cmd->add_option("-t,--threads", flags.threads,
                    "worker threads, 0 = all cores; never changes results")
        ->envname("CLOCKFCS_THREADS");
  };
  auto add_system = [&](CLI::App* cmd) {
    cmd->add_option("--model", flags.model, "quantum or classical model file");
    cmd->add_option("--policy", flags.policy,
                    "feedback policy file (clockwork_dims come from the config)");
    cmd->add_option("--current", flags.current,
                    "current file (default: count every jump)");
  };
  auto add_objective = [&](CLI::App* cmd) {
    cmd->add_option(
        "--objective", flags.objective,
        "qubit | two_qubit_feedback | classical_ring | classical_feedback");
    cmd->add_option("--gamma", flags.gamma, "tick rate unit");
  };

  CLI::App* snr = app.add_subcommand("snr", "exact F, D, S of one current");
  add_common(snr);
  add_system(snr);

  CLI::App* bounds = app.add_subcommand(
      "bounds", "F, D, S next to the kinetic and feedback bounds");
  add_common(bounds);
  add_system(bounds);

  CLI::App* sweep =
      app.add_subcommand("sweep", "grid evaluation of a named objective");
  add_common(sweep);
  add_objective(sweep);

  CLI::App* optimize =
      app.add_subcommand("optimize", "simplex refinement of a named objective");
  add_common(optimize);
  add_objective(optimize);

  CLI::App* simulate = app.add_subcommand(
      "simulate", "stochastic trajectory estimate next to the exact values");
  add_common(simulate);
  add_system(simulate);
  simulate->add_option("--horizon", flags.horizon,
                       "time horizon (default: 500 / median escape rate)");
  simulate->add_option("-n,--trajectories", flags.trajectories,
                       "trajectory count");
  simulate->add_option("--seed", flags.seed, "RNG seed");

  CLI::App* verify = app.add_subcommand(
      "verify-theorem1", "randomized falsification of the feedback bound");
  add_common(verify);
  verify->add_option("--trials", flags.trials, "random instance count");
  verify->add_option("--seed", flags.seed, "RNG seed");

  CLI::App* compare = app.add_subcommand(
      "compare", "constant-policy ceiling against the feedback optimum");
  add_common(compare);
  compare->add_option("--comparison", flags.comparison,
                      "two_qubit | classical_pair");
  compare->add_option("--gamma", flags.gamma, "tick rate unit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // bad flags are configuration errors
  }

  const std::string command = app.get_subcommands().front()->get_name();
  const clockfcs::RunOutcome outcome = clockfcs::run(command, config, flags);
  std::cout << outcome.summary << "\n";
  return outcome.status;
}
