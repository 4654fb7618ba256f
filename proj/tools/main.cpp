#include <cmath>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fracpde/errors.hpp"
#include "fracpde/fractional.hpp"
#include "fracpde/gamma.hpp"
#include "fracpde/oracles.hpp"
#include "fracpde/run.hpp"
#include "fracpde/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitViolations = 4;

int run_study(const std::string& config, const fracpde::CliOptions& opts) {
  const fracpde::RunRecord record = fracpde::run_config(config, opts);
  std::printf("study=%s hash=%s violations=%d\n", record.study.c_str(),
              record.config_hash.c_str(), record.violations);
  for (const auto& [key, value] : record.metrics) {
    std::printf("  %s = %.10g\n", key.c_str(), value);
  }
  for (const std::string& artifact : record.artifacts) {
    std::printf("  wrote %s\n", artifact.c_str());
  }
  return record.violations > 0 ? kExitViolations : kExitOk;
}

int run_oracle(const std::string& name, const std::vector<double>& args) {
  using fracpde::FractionalOrder;
  auto need = [&](size_t n) {
    if (args.size() != n) {
      throw fracpde::ConfigError("oracle '" + name + "' expects " +
                                 std::to_string(n) + " numeric arguments");
    }
  };
  double value = 0.0;
  if (name == "gamma") {
    need(1);
    value = fracpde::gamma_fn(args[0]);
  } else if (name == "mittag_leffler") {
    need(2);
    value = fracpde::mittag_leffler(FractionalOrder(args[0]), args[1]);
  } else if (name == "power_rule") {
    // alpha beta t [a]
    if (args.size() != 3 && args.size() != 4) {
      throw fracpde::ConfigError("oracle 'power_rule' expects alpha beta t [a]");
    }
    value = fracpde::power_rule_caputo(FractionalOrder(args[0]), args[1], args[2],
                                       args.size() == 4 ? args[3] : 0.0);
  } else if (name == "psi_lambda_kernel") {
    need(3);  // a lambda alpha
    value = fracpde::psi_lambda_kernel_value(args[0], args[1],
                                             FractionalOrder(args[2]));
  } else if (name == "eigen_decay") {
    need(3);  // lambda alpha t
    value = fracpde::mittag_leffler(FractionalOrder(args[1]),
                                    -args[0] * std::pow(args[2], args[1]));
  } else {
    throw fracpde::ConfigError(
        "unknown oracle '" + name +
        "'; available: gamma, mittag_leffler, power_rule, psi_lambda_kernel, "
        "eigen_decay");
  }
  std::printf("%.17g\n", value);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fracpde: monotone-scheme solver for Caputo time-fractional "
               "fully nonlinear PDEs"};
  app.set_version_flag("--version", fracpde::kVersion);
  app.require_subcommand(1);

  fracpde::CliOptions opts;
  std::string config;
  std::string oracle_name;
  std::vector<double> oracle_args;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config, "run configuration (JSON)")->required();
    sub->add_option("--out", opts.out_dir, "output directory override");
    sub->add_option("--seed", opts.seed, "random seed for randomized studies");
    sub->add_option("--threads", opts.threads, "parallelism for independent cases");
  };

  CLI::App* solve_cmd = app.add_subcommand("solve", "march one problem and emit artifacts");
  CLI::App* conv_cmd = app.add_subcommand("convergence", "refinement study against the eigen oracle");
  CLI::App* verify_cmd = app.add_subcommand("verify", "viscosity residual checks (and alpha study)");
  CLI::App* compare_cmd = app.add_subcommand("compare", "randomized comparison-principle runs");
  CLI::App* envelope_cmd = app.add_subcommand("envelope", "sup/inf-convolution diagnostics");
  for (CLI::App* sub : {solve_cmd, conv_cmd, verify_cmd, compare_cmd, envelope_cmd}) {
    add_common(sub);
  }

  CLI::App* oracle_cmd = app.add_subcommand("oracle", "print a closed-form oracle value");
  oracle_cmd->add_option("name", oracle_name, "oracle name")->required();
  oracle_cmd->add_option("params", oracle_args, "numeric parameters");

  CLI11_PARSE(app, argc, argv);

  try {
    if (oracle_cmd->parsed()) {
      return run_oracle(oracle_name, oracle_args);
    }
    // The study kind comes from the config file; the subcommand must agree so
    // scripts read naturally. A mismatch is a config error.
    const fracpde::RunConfig cfg = fracpde::load_config(config);
    const auto expect = [&](fracpde::StudyKind want, const char* name) {
      if (cfg.study != want) {
        throw fracpde::ConfigError(std::string("config study.kind does not match the '") +
                                   name + "' subcommand");
      }
    };
    if (solve_cmd->parsed()) expect(fracpde::StudyKind::solve, "solve");
    if (conv_cmd->parsed()) expect(fracpde::StudyKind::convergence, "convergence");
    if (verify_cmd->parsed()) expect(fracpde::StudyKind::verify, "verify");
    if (compare_cmd->parsed()) expect(fracpde::StudyKind::compare, "compare");
    if (envelope_cmd->parsed()) expect(fracpde::StudyKind::envelope, "envelope");
    return run_study(config, opts);
  } catch (const fracpde::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const fracpde::NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumerical;
  }
}
