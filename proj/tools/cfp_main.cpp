#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "cfp/cli.hpp"

namespace {

void add_common_flags(CLI::App* cmd, cfp::CliOptions& opt, bool needs_input) {
  auto* input = cmd->add_option("--input", opt.input_path,
                                "problem file (JSON)");
  if (needs_input) input->required();
  cmd->add_option("--output", opt.output_path,
                  "write the report here instead of stdout");
  cmd->add_option("--seed", opt.seed, "random seed for sampled checks");
  cmd->add_option("--tol", opt.tol, "numeric tolerance");
  cmd->add_option("--max-iter", opt.max_iter, "iteration budget");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"certify contraction conditions, iterate to fixed points, "
               "and solve dynamic-programming equations on finite spaces"};
  app.require_subcommand(1);

  cfp::CliOptions opt;

  auto* certify = app.add_subcommand(
      "certify", "check a contraction condition for a map");
  add_common_flags(certify, opt, true);
  certify->add_option("--map", opt.map_name, "map to certify");
  certify->add_option("--condition", opt.condition,
                      "condition kind (banach, eta, weak, caristi, ...)")
      ->required();
  certify->add_option("--gauge", opt.gauge_name, "gauge for the condition");
  certify->add_option("--potential", opt.potential_name,
                      "potential table for caristi conditions");
  certify->add_option("--samples", opt.samples,
                      "sample count for rho-bellman");

  auto* iterate =
      app.add_subcommand("iterate", "run a (set-valued) Picard orbit");
  add_common_flags(iterate, opt, true);
  iterate->add_option("--map", opt.map_name, "map to iterate")->required();
  iterate->add_option("--start", opt.start_label, "starting point label")
      ->required();
  iterate->add_option("--gauge", opt.gauge_name,
                      "contraction gauge for potentials and set-valued "
                      "selection");
  iterate->add_flag("--strict", opt.strict,
                    "certify the map against the gauge before iterating");

  auto* hausdorff = app.add_subcommand(
      "hausdorff", "distance between two point sets");
  add_common_flags(hausdorff, opt, true);
  hausdorff->add_option("--set-a", opt.set_a, "comma-separated point labels")
      ->required();
  hausdorff->add_option("--set-b", opt.set_b, "comma-separated point labels")
      ->required();

  auto* bellman = app.add_subcommand(
      "bellman", "certify and solve the dynamic-programming block");
  add_common_flags(bellman, opt, true);
  bellman->add_option("--h0", opt.h0_name,
                      "named starting value function (default: zeros)");
  bellman->add_option("--samples", opt.samples,
                      "certification sample count");

  auto* selftest = app.add_subcommand(
      "selftest", "run the built-in random-space oracle suites");
  add_common_flags(selftest, opt, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  for (CLI::App* cmd : {certify, iterate, hausdorff, bellman, selftest}) {
    if (cmd->parsed()) opt.command = cmd->get_name();
  }

  const cfp::CommandResult result = cfp::run_command(opt);
  const std::string text = result.report.dump(2) + "\n";
  if (opt.output_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(opt.output_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write report to " << opt.output_path << "\n";
      return 2;
    }
    out << text;
  }
  std::cerr << result.summary << "\n";
  return result.exit_code;
}
