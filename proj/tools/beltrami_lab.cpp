#include <cstdio>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "beltrami/errors.hpp"
#include "beltrami/experiment.hpp"

namespace {

using beltrami::ExperimentConfig;

/// One subcommand's option set. Flags bind into `flags`; resolve() starts
/// from an optional --config file and lets only explicitly passed flags
/// override it, so file and command line compose the way the help says.
struct CommandBinding {
  CLI::App* app = nullptr;
  ExperimentConfig flags;
  std::string center_text;
  std::string config_path;
  std::vector<std::pair<CLI::Option*, std::function<void(const ExperimentConfig&, ExperimentConfig&)>>>
      copiers;

  template <typename T>
  void bind(const std::string& name, T ExperimentConfig::* member, const std::string& help) {
    CLI::Option* option = app->add_option(name, flags.*member, help);
    copiers.emplace_back(option, [member](const ExperimentConfig& src, ExperimentConfig& dst) {
      dst.*member = src.*member;
    });
  }

  void bind_common() {
    bind("--n", &ExperimentConfig::n, "grid samples per axis (power of two)");
    bind("--half-width", &ExperimentConfig::half_width, "grid half width");
    CLI::Option* center = app->add_option("--center", center_text, "grid center, re+imi");
    copiers.emplace_back(center, [this](const ExperimentConfig&, ExperimentConfig& dst) {
      dst.center = ExperimentConfig::parse("center = " + center_text).center;
    });
    bind("--padding", &ExperimentConfig::padding, "transform padding factor (1, 2 or 4)");
    bind("--tol", &ExperimentConfig::tol, "solver tolerance");
    bind("--max-iter", &ExperimentConfig::max_iter, "solver iteration budget");
    bind("--seed", &ExperimentConfig::seed, "random seed");
    bind("--jobs", &ExperimentConfig::jobs, "concurrent cases for sweeps");
    bind("--out", &ExperimentConfig::out, "output directory");
    app->add_option("--config", config_path, "flat key = value config file; flags override");
  }

  ExperimentConfig resolve(const std::string& command) const {
    ExperimentConfig result = flags;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw beltrami::config_error("cannot read config file " + config_path);
      std::ostringstream text;
      text << in.rdbuf();
      result = ExperimentConfig::parse(text.str());
    }
    // Explicitly passed flags win over the file; --center also needs this
    // pass to convert its text form even when no file is involved.
    for (const auto& [option, copy] : copiers) {
      if (option->count() > 0) copy(flags, result);
    }
    result.command = command;
    return result;
  }
};

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for the Beltrami equation: canonical solutions,\n"
               "parameter derivatives, elliptic-estimate sweeps and Bers metrics."};
  app.require_subcommand(1);

  std::vector<std::unique_ptr<CommandBinding>> bindings;
  auto command = [&](const std::string& name, const std::string& help) -> CommandBinding& {
    auto binding = std::make_unique<CommandBinding>();
    binding->app = app.add_subcommand(name, help);
    binding->bind_common();
    bindings.push_back(std::move(binding));
    return *bindings.back();
  };

  CommandBinding& solve = command("solve", "canonical solution for a coefficient preset");
  solve.bind("--mu", &ExperimentConfig::mu, "coefficient preset");

  CommandBinding& theta = command("theta", "parameter derivative and its finite-difference check");
  theta.bind("--mu", &ExperimentConfig::mu, "coefficient preset");
  theta.bind("--dir", &ExperimentConfig::dir, "direction preset");
  theta.bind("--fd-step", &ExperimentConfig::fd_step, "central-difference step");

  CommandBinding& holomorphy = command("holomorphy", "Cauchy-Riemann defect sweep over steps");
  holomorphy.bind("--mu", &ExperimentConfig::mu, "coefficient preset");
  holomorphy.bind("--dir", &ExperimentConfig::dir, "direction preset");
  holomorphy.bind("--s-values", &ExperimentConfig::s_values, "comma-separated steps");

  CommandBinding& develop = command("develop", "first-order development residual table");
  develop.bind("--mu", &ExperimentConfig::mu, "coefficient preset");
  develop.bind("--dir", &ExperimentConfig::dir, "direction preset");
  develop.bind("--s-values", &ExperimentConfig::s_values, "comma-separated steps");
  develop.bind("--k", &ExperimentConfig::k, "residuals measured in W^{k+1,2}");

  CommandBinding& estimate = command("estimate", "elliptic-estimate ratios over manufactured solutions");
  estimate.bind("--trials", &ExperimentConfig::trials, "number of manufactured cases");
  estimate.bind("--k", &ExperimentConfig::k, "estimate order");
  estimate.bind("--p", &ExperimentConfig::p, "Lebesgue exponent");
  estimate.bind("--r", &ExperimentConfig::r, "inner disk radius");
  estimate.bind("--R", &ExperimentConfig::R, "outer disk radius");

  CommandBinding& bers = command("bers", "glued uniformization, metric components and defect");
  bers.bind("--mu", &ExperimentConfig::mu, "upper half-plane coefficient preset");
  bers.bind("--mu2", &ExperimentConfig::mu2, "lower preset, or 'reflect'");

  CommandBinding& fixtures = command("fixtures", "closed-form fixture slopes and transform identities");
  fixtures.bind("--q", &ExperimentConfig::q, "integrability exponent of the degenerating family");

  CommandBinding& probe = command("probe-np", "empirical Beurling L^p operator norm lower bound");
  probe.bind("--p", &ExperimentConfig::p, "Lebesgue exponent");
  probe.bind("--trials", &ExperimentConfig::trials, "random fields to try");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    for (const auto& binding : bindings) {
      if (binding->app->parsed()) {
        beltrami::run_experiment(binding->resolve(binding->app->get_name()));
        return 0;
      }
    }
    std::fprintf(stderr, "beltrami-lab: config: no subcommand selected\n");
    return 2;
  } catch (const beltrami::config_error& e) {
    std::fprintf(stderr, "beltrami-lab: config: %s\n", e.what());
    return 2;
  } catch (const beltrami::convergence_error& e) {
    std::fprintf(stderr, "beltrami-lab: convergence: %s\n", e.what());
    return 3;
  } catch (const beltrami::invariant_error& e) {
    std::fprintf(stderr, "beltrami-lab: invariant: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "beltrami-lab: internal: %s\n", e.what());
    return 1;
  }
}
