#pragma once

#include <cstdint>
#include <string>

#include "beltrami/solver.hpp"

namespace beltrami {

inline constexpr const char* kToolVersion = "0.1.0";

/// Everything a batch run needs, serializable as flat `key = value` text.
/// Coefficient presets are analytic families sampled on demand, so a config
/// is tiny and resolution-independent. serialize/parse round-trip exactly
/// (reals printed with 17 significant digits).
struct ExperimentConfig {
  std::string command = "solve";

  int n = 256;
  double half_width = 4.0;
  cdouble center{0.0, 0.0};
  int padding = 2;

  double tol = 1e-10;
  int max_iter = 200;

  /// Coefficient presets: "zero",
  /// "gaussian:center=<re>+<im>i,amp=<re>+<im>i,width=<w>[,cut_start=,cut_end=]",
  /// "radial:alpha=<a>[,r0=,r1=]", "remark_q:q=<q>"; mu2 also accepts
  /// "reflect" (the conjugate reflection of mu across the real axis).
  std::string mu = "zero";
  std::string dir = "gaussian:center=0+0.5i,amp=0.5+0i,width=1";
  std::string mu2 = "reflect";

  /// Decreasing comma-separated parameter steps for sweeps.
  std::string s_values = "0.1,0.03,0.01,0.003";
  double fd_step = 1e-3;

  int k = 1;
  double p = 2.0;
  double q = 4.0;
  double r = 1.0;
  double R = 2.0;
  int trials = 20;

  std::uint64_t seed = 0;
  int jobs = 1;
  std::string out = "out";

  bool operator==(const ExperimentConfig&) const = default;

  std::string serialize() const;
  /// Strict inverse of serialize: unknown keys and malformed values are
  /// config_errors naming the key.
  static ExperimentConfig parse(const std::string& text);
  /// FNV-1a of the serialized text, 16 hex digits; recorded in manifests.
  std::string hash() const;
};

/// Samples a preset string on the grid. Direction fields pass
/// require_contractive = false; the "reflect" alias is resolved by the bers
/// subcommand, not here.
BeltramiCoefficient parse_coefficient_preset(const std::string& preset, const GridSpec& grid,
                                             bool require_contractive);

/// Runs config.command, writing manifest.json, report.json, config.txt and
/// the command's own artifacts into config.out. Errors surface as the usual
/// exception hierarchy; nothing is caught here.
void run_experiment(const ExperimentConfig& config);

} // namespace beltrami
