#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace sgdlab::cli;
  CLI::App app{"sgdlab: SGD steady-state and test-loss laboratory"};
  app.require_subcommand(1);
  RunOptions opts;
  std::string seed, out, methods;
  const char* names[] = {"sweep", "validate", "probe", "sgd", "fp", "reparam-check"};
  const char* help[] = {"temperature sweep (quadrature, laplace, sgd_mc)",
                        "derivative, curl and quadrature self-checks",
                        "loss along each train-test pair and curvature fits",
                        "SGD chains against the steady-state density",
                        "Fokker-Planck evolution toward the steady state",
                        "reparametrization invariance report"};
  for (int i = 0; i < 6; ++i) {
    CLI::App* sub = app.add_subcommand(names[i], help[i]);
    sub->add_option("--config", opts.config_path, "experiment config")->required();
    sub->add_option("--out", out, "output directory");
    sub->add_option("--seed", seed, "seed override (u64)");
    sub->add_option("--methods", methods, "comma-separated methods");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }
  if (!out.empty()) opts.out_dir = out;
  if (!seed.empty()) opts.seed = seed;
  if (!methods.empty()) opts.methods = methods;
  return run_command(app.get_subcommands().front()->get_name(), opts);
}
