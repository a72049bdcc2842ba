#include "beltrami/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"

#include "beltrami/bers.hpp"
#include "beltrami/errors.hpp"
#include "beltrami/families.hpp"
#include "beltrami/variation.hpp"

namespace beltrami {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string fmt_complex(cdouble z) {
  char buf[88];
  std::snprintf(buf, sizeof(buf), "%.17g%+.17gi", z.real(), z.imag());
  return buf;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

[[noreturn]] void bad_value(const std::string& key, std::string_view value) {
  throw config_error("config key '" + key + "': cannot parse value '" + std::string(value) +
                     "'");
}

double parse_real(std::string_view s, const std::string& key) {
  s = trim(s);
  std::string_view digits = s;
  // from_chars takes "-x" but not "+x"; complex parts carry explicit signs.
  if (!digits.empty() && digits.front() == '+') digits.remove_prefix(1);
  double x = 0.0;
  auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), x);
  if (ec != std::errc{} || end != digits.data() + digits.size() || digits.empty() ||
      !std::isfinite(x)) {
    bad_value(key, s);
  }
  return x;
}

template <typename Int>
Int parse_integer(std::string_view s, const std::string& key) {
  s = trim(s);
  Int x{};
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc{} || end != s.data() + s.size() || s.empty()) bad_value(key, s);
  return x;
}

/// Accepts "<re>", "<im>i" and "<re><sign><im>i".
cdouble parse_complex(std::string_view s, const std::string& key) {
  s = trim(s);
  if (s.empty()) bad_value(key, s);
  if (s.back() != 'i') return cdouble{parse_real(s, key), 0.0};
  std::string_view body = s.substr(0, s.size() - 1);
  std::size_t split = std::string_view::npos;
  for (std::size_t pos = 1; pos < body.size(); ++pos) {
    char c = body[pos];
    char prev = body[pos - 1];
    if ((c == '+' || c == '-') && prev != 'e' && prev != 'E') split = pos;
  }
  if (split == std::string_view::npos) return cdouble{0.0, parse_real(body, key)};
  return cdouble{parse_real(body.substr(0, split), key), parse_real(body.substr(split), key)};
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    std::size_t pos = s.find(sep);
    if (pos == std::string_view::npos) {
      out.push_back(s);
      return out;
    }
    out.push_back(s.substr(0, pos));
    s.remove_prefix(pos + 1);
  }
}

std::vector<double> parse_real_list(const std::string& csv, const std::string& key) {
  std::vector<double> out;
  for (std::string_view item : split(csv, ',')) out.push_back(parse_real(item, key));
  if (out.empty()) bad_value(key, csv);
  return out;
}

/// key=value pairs of a preset argument list.
std::vector<std::pair<std::string, std::string_view>> preset_args(std::string_view args,
                                                                  const std::string& family) {
  std::vector<std::pair<std::string, std::string_view>> out;
  if (trim(args).empty()) return out;
  for (std::string_view item : split(args, ',')) {
    std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw config_error("preset " + family + ": expected key=value, got '" +
                         std::string(item) + "'");
    }
    out.emplace_back(std::string(trim(item.substr(0, eq))), trim(item.substr(eq + 1)));
  }
  return out;
}

ComplexField sample_gaussian_preset(std::string_view args, const GridSpec& grid) {
  BumpSpec bump;
  bump.amplitude = cdouble{0.0, 0.0};
  double width = 1.0, cut_start = -1.0, cut_end = -1.0;
  bool have_amp = false;
  for (auto& [key, value] : preset_args(args, "gaussian")) {
    if (key == "center") {
      bump.center = parse_complex(value, "gaussian center");
    } else if (key == "amp") {
      bump.amplitude = parse_complex(value, "gaussian amp");
      have_amp = true;
    } else if (key == "width") {
      width = parse_real(value, "gaussian width");
    } else if (key == "cut_start") {
      cut_start = parse_real(value, "gaussian cut_start");
    } else if (key == "cut_end") {
      cut_end = parse_real(value, "gaussian cut_end");
    } else {
      throw config_error("preset gaussian: unknown key '" + key + "'");
    }
  }
  if (!have_amp) throw config_error("preset gaussian: amp is required");
  if (!(width > 0.0)) throw config_error("preset gaussian: width must be positive");
  bump.width = width;
  bump.cut_start = cut_start > 0.0 ? cut_start : width;
  bump.cut_end = cut_end > 0.0 ? cut_end : 1.45 * width;
  if (!(bump.cut_start < bump.cut_end)) {
    throw config_error("preset gaussian: cut_start must be below cut_end");
  }
  return sample_bump(grid, bump);
}

ComplexField sample_radial_preset(std::string_view args, const GridSpec& grid) {
  RadialFixture fx;
  bool have_alpha = false;
  for (auto& [key, value] : preset_args(args, "radial")) {
    if (key == "alpha") {
      fx.alpha = parse_real(value, "radial alpha");
      have_alpha = true;
    } else if (key == "r0") {
      fx.r0 = parse_real(value, "radial r0");
    } else if (key == "r1") {
      fx.r1 = parse_real(value, "radial r1");
    } else {
      throw config_error("preset radial: unknown key '" + key + "'");
    }
  }
  if (!have_alpha) throw config_error("preset radial: alpha is required");
  if (!(fx.alpha > 0.0)) throw config_error("preset radial: alpha must be positive");
  if (!(0.0 < fx.r0 && fx.r0 < fx.r1)) {
    throw config_error("preset radial: need 0 < r0 < r1");
  }
  return sample_function(grid, [&fx](cdouble z) { return fx.mu(z); });
}

ComplexField sample_remark_preset(std::string_view args, const GridSpec& grid) {
  double q = 0.0;
  for (auto& [key, value] : preset_args(args, "remark_q")) {
    if (key == "q") {
      q = parse_real(value, "remark_q q");
    } else {
      throw config_error("preset remark_q: unknown key '" + key + "'");
    }
  }
  if (!(q > 2.0)) throw config_error("preset remark_q: need q > 2");
  double alpha = 2.0 - 2.0 / q;
  // Coefficient of f(z) = z + |z|^alpha, truncated smoothly past the unit
  // circle to keep compact support.
  return sample_function(grid, [alpha](cdouble z) -> cdouble {
    double rho = std::abs(z);
    if (rho == 0.0) return {0.0, 0.0};
    double cut = falloff((rho - 1.0) / 0.4);
    if (cut == 0.0) return {0.0, 0.0};
    double a = 0.5 * alpha * std::pow(rho, alpha - 2.0);
    return cut * a * z / (1.0 + a * std::conj(z));
  });
}

std::string preset_family(const std::string& preset) {
  std::size_t colon = preset.find(':');
  return std::string(trim(preset.substr(0, colon)));
}

std::string_view preset_payload(const std::string& preset) {
  std::size_t colon = preset.find(':');
  return colon == std::string::npos ? std::string_view{}
                                    : std::string_view(preset).substr(colon + 1);
}

void write_field_file(const std::filesystem::path& path, const ComplexField& field) {
  std::ofstream out(path);
  if (!out) throw config_error("cannot open " + path.string() + " for writing");
  write_fld1(field, out);
  if (!out) throw config_error("failed writing " + path.string());
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw config_error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw config_error("failed writing " + path.string());
}

ordered_json make_manifest(const ExperimentConfig& cfg) {
  ordered_json manifest;
  manifest["tool"] = "beltrami-lab";
  manifest["version"] = kToolVersion;
  manifest["command"] = cfg.command;
  manifest["config_hash"] = cfg.hash();
  manifest["seed"] = cfg.seed;
  manifest["modules"] = ordered_json{{"kernels", "1.0"},   {"grid", "1.0"},
                                     {"transforms", "1.0"}, {"beltrami", "1.0"},
                                     {"variation", "1.0"},  {"bers", "1.0"},
                                     {"cli", "1.0"}};
  manifest["conventions"] = ordered_json{
      {"grid",
       "sample (i,j) at center + ((i - n/2) + (j - n/2) i) spacing; "
       "spacing = 2 half_width / n; samples row-major i*n + j"},
      {"fourier",
       "uhat(xi) = integral u(z) exp(-2 pi i (x xi1 + y xi2)) dA; "
       "d_z <-> pi i conj(xi); d_zbar <-> pi i xi; T <-> conj(xi)/xi; P <-> 1/(pi i xi)"},
      {"field_format",
       "FLD1 n=<n> center=<re>,<im> half_width=<w>; then n^2 lines i,j,re,im row-major"},
      {"metric", kMetricConvention}};
  return manifest;
}

double w12_report_norm(const SolutionField& u) {
  return u.sobolev(SobolevSpec::make(1, 2.0, reporting_region(u.grid())));
}

void run_solve(const ExperimentConfig& cfg, const GridSpec& grid,
               std::shared_ptr<const TransformPlan> plan, const std::filesystem::path& out,
               ordered_json& report) {
  BeltramiCoefficient mu = parse_coefficient_preset(cfg.mu, grid, true);
  SolveReport solve = canonical_solution(mu, cfg.tol, cfg.max_iter, std::move(plan));
  require_converged(solve, "solve");

  write_field_file(out / "solution.fld", solve.solution.values());
  report["sup_mu"] = mu.sup();
  report["iterations"] = solve.iterations;
  report["residual"] = solve.residual;
  report["contraction_estimate"] = solve.contraction_estimate;
  report["residual_history"] = solve.residual_history;
  report["f_at_zero_abs"] = std::abs(solve.solution.value_at(cdouble{0.0, 0.0}));
  report["f_at_one_abs"] = std::abs(solve.solution.value_at(cdouble{1.0, 0.0}));
  report["solution"] = "solution.fld";
}

void run_theta(const ExperimentConfig& cfg, const GridSpec& grid,
               std::shared_ptr<const TransformPlan> plan, const std::filesystem::path& out,
               ordered_json& report) {
  BeltramiCoefficient mu = parse_coefficient_preset(cfg.mu, grid, true);
  BeltramiCoefficient dir = parse_coefficient_preset(cfg.dir, grid, false);
  ThetaReport th = theta(mu, dir, cfg.tol, cfg.max_iter, plan);
  SolutionField fd =
      finite_difference_derivative(mu, dir, cfg.fd_step, nullptr, cfg.tol, cfg.max_iter, plan);

  SolutionField diff = fd;
  diff.add_scaled(th.theta, -1.0);

  write_field_file(out / "theta.fld", th.theta.values());
  write_field_file(out / "fd_derivative.fld", fd.values());
  report["fd_step"] = cfg.fd_step;
  report["theta_norm_w12"] = w12_report_norm(th.theta);
  report["agreement_error_w12"] = w12_report_norm(diff);
  report["base_iterations"] = th.base.iterations;
  report["linear_iterations"] = th.linear.iterations;
  report["theta_at_zero_abs"] = std::abs(th.theta.value_at(cdouble{0.0, 0.0}));
  report["theta_at_one_abs"] = std::abs(th.theta.value_at(cdouble{1.0, 0.0}));
  report["theta"] = "theta.fld";
  report["fd_derivative"] = "fd_derivative.fld";
}

void run_holomorphy(const ExperimentConfig& cfg, const GridSpec& grid,
                    std::shared_ptr<const TransformPlan> plan, ordered_json& report) {
  BeltramiCoefficient mu = parse_coefficient_preset(cfg.mu, grid, true);
  BeltramiCoefficient dir = parse_coefficient_preset(cfg.dir, grid, false);
  std::vector<double> s_list = parse_real_list(cfg.s_values, "s_values");

  ThetaReport th = theta(mu, dir, cfg.tol, cfg.max_iter, plan);
  double theta_norm = w12_report_norm(th.theta);
  report["theta_norm_w12"] = theta_norm;

  auto relative = [theta_norm](double defect) {
    return theta_norm > 0.0 ? defect / theta_norm : 0.0;
  };
  ordered_json rows = ordered_json::array();
  for (double s : s_list) {
    double defect = cauchy_riemann_defect(mu, dir, s, false, cfg.tol, cfg.max_iter, plan);
    rows.push_back(
        ordered_json{{"s", s}, {"defect", defect}, {"defect_over_theta", relative(defect)}});
  }
  report["sweep"] = std::move(rows);

  double conj_defect =
      cauchy_riemann_defect(mu, dir, s_list.front(), true, cfg.tol, cfg.max_iter, plan);
  report["conjugate_defect"] = conj_defect;
  report["conjugate_defect_over_theta"] = relative(conj_defect);
}

void run_develop(const ExperimentConfig& cfg, const GridSpec& grid,
                 std::shared_ptr<const TransformPlan> plan, ordered_json& report) {
  BeltramiCoefficient mu = parse_coefficient_preset(cfg.mu, grid, true);
  BeltramiCoefficient dir = parse_coefficient_preset(cfg.dir, grid, false);
  std::vector<double> s_list = parse_real_list(cfg.s_values, "s_values");

  auto rows = development_residual(mu, dir, s_list, cfg.k, cfg.tol, cfg.max_iter,
                                   std::move(plan));
  ordered_json table = ordered_json::array();
  bool monotone = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    table.push_back(ordered_json{{"s", rows[i].first}, {"residual_over_s", rows[i].second}});
    if (i > 0 && !(rows[i].second < rows[i - 1].second)) monotone = false;
  }
  report["k"] = cfg.k;
  report["rows"] = std::move(table);
  report["monotone_decreasing"] = monotone;
}

void run_estimate(const ExperimentConfig& cfg, const GridSpec& grid,
                  const std::filesystem::path& out, ordered_json& report) {
  if (cfg.trials < 1) throw config_error("estimate: trials must be positive");
  if (cfg.jobs < 1) throw config_error("estimate: jobs must be positive");

  // Draw every case up front so the artifact does not depend on --jobs.
  struct Case {
    BumpSpec mu_bump;
    BumpSpec u_bump;
  };
  BumpSampler sampler(cfg.seed);
  std::vector<Case> cases;
  cases.reserve(cfg.trials);
  for (int t = 0; t < cfg.trials; ++t) {
    BumpSpec mu_bump = sampler.next(grid);
    double mu_amp = sampler.uniform(0.2, 0.5);
    mu_bump.amplitude *= mu_amp / std::abs(mu_bump.amplitude);
    BumpSpec u_bump = sampler.next(grid);
    cases.push_back(Case{mu_bump, u_bump});
  }

  std::vector<double> ratios(cases.size(), 0.0);
  std::atomic<std::size_t> next_case{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    while (true) {
      std::size_t t = next_case.fetch_add(1);
      if (t >= cases.size()) return;
      try {
        auto mu = BeltramiCoefficient::from_field(sample_bump(grid, cases[t].mu_bump));
        ComplexField u = sample_bump(grid, cases[t].u_bump);
        ComplexField v = wirtinger(u, 0, 1);
        v.add_scaled(pointwise_multiply(mu.field(), wirtinger(u, 1, 0)), -1.0);
        ratios[t] = elliptic_ratio(mu, u, v, cfg.r, cfg.R, cfg.k, cfg.p);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  int thread_count = std::min<int>(cfg.jobs, cfg.trials);
  std::vector<std::thread> threads;
  threads.reserve(thread_count);
  for (int i = 0; i < thread_count; ++i) threads.emplace_back(worker);
  for (auto& thread : threads) thread.join();
  if (failure) std::rethrow_exception(failure);

  std::string csv = "case_id,k,p,r,R,ratio\n";
  double max_ratio = 0.0;
  for (std::size_t t = 0; t < ratios.size(); ++t) {
    csv += std::to_string(t) + "," + std::to_string(cfg.k) + "," + fmt_real(cfg.p) + "," +
           fmt_real(cfg.r) + "," + fmt_real(cfg.R) + "," + fmt_real(ratios[t]) + "\n";
    max_ratio = std::max(max_ratio, ratios[t]);
  }
  write_text_file(out / "estimate.csv", csv);

  report["trials"] = cfg.trials;
  report["k"] = cfg.k;
  report["p"] = cfg.p;
  report["r"] = cfg.r;
  report["R"] = cfg.R;
  report["max_ratio"] = max_ratio;
  report["csv"] = "estimate.csv";
}

void run_bers(const ExperimentConfig& cfg, const GridSpec& grid,
              std::shared_ptr<const TransformPlan> plan, const std::filesystem::path& out,
              ordered_json& report) {
  BeltramiCoefficient mu1 = parse_coefficient_preset(cfg.mu, grid, true);
  BeltramiCoefficient mu2 =
      cfg.mu2 == "reflect"
          ? BeltramiCoefficient::from_field(reflect_conjugate(mu1.field()))
          : parse_coefficient_preset(cfg.mu2, grid, true);
  GluedCoefficient glued = GluedCoefficient::make(std::move(mu1), std::move(mu2));
  UniformizationResult maps = simultaneous_uniformize(glued, cfg.tol, cfg.max_iter,
                                                      std::move(plan));
  MetricComponents metric = bers_metric(maps);

  DiskRegion region = DiskRegion::make(grid.center + cdouble{0.0, grid.half_width / 2.0},
                                       grid.half_width / 2.0 - 0.5);
  double defect = hyperbolic_defect(metric, region);

  write_field_file(out / "f1.fld", maps.f1);
  write_field_file(out / "f2bar.fld", maps.f2bar);
  write_field_file(out / "g_zz.fld", metric.g_zz);
  write_field_file(out / "g_zzbar.fld", metric.g_zzbar);
  write_field_file(out / "g_zbzb.fld", metric.g_zbzb);

  report["metric_convention"] = kMetricConvention;
  report["iterations"] = maps.solve.iterations;
  report["residual"] = maps.solve.residual;
  report["min_separation"] = maps.min_separation;
  report["defect_region_center"] = fmt_complex(region.center);
  report["defect_region_radius"] = region.radius;
  report["hyperbolic_defect"] = defect;
  report["g_zbzb_mass_above_half"] = upper_mass(metric.g_zbzb, 0.5);
  report["fields"] =
      ordered_json{{"f1", "f1.fld"},       {"f2bar", "f2bar.fld"},   {"g_zz", "g_zz.fld"},
                   {"g_zzbar", "g_zzbar.fld"}, {"g_zbzb", "g_zbzb.fld"}};
}

void run_fixtures(const ExperimentConfig& cfg, const GridSpec& grid,
                  std::shared_ptr<const TransformPlan> plan, ordered_json& report) {
  std::vector<double> radii = remark_default_radii(cfg.q);
  double slope = remark_fixture_slope(cfg.q, radii);
  report["remark"] = ordered_json{
      {"q", cfg.q}, {"slope", slope}, {"expected_slope", -2.0 / cfg.q}, {"radii", radii}};

  BumpSampler sampler(cfg.seed);
  ComplexField u = make_mean_free(sample_bump(grid, sampler.next(grid)));
  double u_norm = lp_norm(u, 2.0);

  ComplexField inverse = plan->apply(u, TransformPlan::Multiplier::cauchy, 0, 1);
  inverse -= u;
  ComplexField pair = plan->apply(u, TransformPlan::Multiplier::cauchy, 1, 0);
  pair -= plan->apply(u, TransformPlan::Multiplier::beurling);

  report["identities"] = ordered_json{
      {"dzbar_cauchy_minus_id", lp_norm(inverse, 2.0) / u_norm},
      {"dz_cauchy_minus_beurling", lp_norm(pair, 2.0) / u_norm}};
}

void run_probe_np(const ExperimentConfig& cfg, std::shared_ptr<const TransformPlan> plan,
                  ordered_json& report) {
  NormProbeReport probe = beurling_norm_probe(*plan, cfg.p, cfg.trials, cfg.seed);
  report["p"] = cfg.p;
  report["trials"] = cfg.trials;
  report["max_ratio"] = probe.max_ratio;
  report["ratios"] = probe.ratios;
}

} // namespace

std::string ExperimentConfig::serialize() const {
  std::string text;
  auto line = [&text](const char* key, const std::string& value) {
    text += key;
    text += " = ";
    text += value;
    text += '\n';
  };
  line("command", command);
  line("n", std::to_string(n));
  line("half_width", fmt_real(half_width));
  line("center", fmt_complex(center));
  line("padding", std::to_string(padding));
  line("tol", fmt_real(tol));
  line("max_iter", std::to_string(max_iter));
  line("mu", mu);
  line("dir", dir);
  line("mu2", mu2);
  line("s_values", s_values);
  line("fd_step", fmt_real(fd_step));
  line("k", std::to_string(k));
  line("p", fmt_real(p));
  line("q", fmt_real(q));
  line("r", fmt_real(r));
  line("R", fmt_real(R));
  line("trials", std::to_string(trials));
  line("seed", std::to_string(seed));
  line("jobs", std::to_string(jobs));
  line("out", out);
  return text;
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream stream(text);
  std::string raw_line;
  while (std::getline(stream, raw_line)) {
    std::string_view line = trim(raw_line);
    if (line.empty() || line.front() == '#') continue;
    std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw config_error("config line is not key = value: '" + std::string(line) + "'");
    }
    std::string key{trim(line.substr(0, eq))};
    std::string value{trim(line.substr(eq + 1))};

    if (key == "command") {
      cfg.command = value;
    } else if (key == "n") {
      cfg.n = parse_integer<int>(value, key);
    } else if (key == "half_width") {
      cfg.half_width = parse_real(value, key);
    } else if (key == "center") {
      cfg.center = parse_complex(value, key);
    } else if (key == "padding") {
      cfg.padding = parse_integer<int>(value, key);
    } else if (key == "tol") {
      cfg.tol = parse_real(value, key);
    } else if (key == "max_iter") {
      cfg.max_iter = parse_integer<int>(value, key);
    } else if (key == "mu") {
      cfg.mu = value;
    } else if (key == "dir") {
      cfg.dir = value;
    } else if (key == "mu2") {
      cfg.mu2 = value;
    } else if (key == "s_values") {
      cfg.s_values = value;
    } else if (key == "fd_step") {
      cfg.fd_step = parse_real(value, key);
    } else if (key == "k") {
      cfg.k = parse_integer<int>(value, key);
    } else if (key == "p") {
      cfg.p = parse_real(value, key);
    } else if (key == "q") {
      cfg.q = parse_real(value, key);
    } else if (key == "r") {
      cfg.r = parse_real(value, key);
    } else if (key == "R") {
      cfg.R = parse_real(value, key);
    } else if (key == "trials") {
      cfg.trials = parse_integer<int>(value, key);
    } else if (key == "seed") {
      cfg.seed = parse_integer<std::uint64_t>(value, key);
    } else if (key == "jobs") {
      cfg.jobs = parse_integer<int>(value, key);
    } else if (key == "out") {
      cfg.out = value;
    } else {
      throw config_error("unknown config key: " + key);
    }
  }
  return cfg;
}

std::string ExperimentConfig::hash() const {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : serialize()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

BeltramiCoefficient parse_coefficient_preset(const std::string& preset, const GridSpec& grid,
                                             bool require_contractive) {
  std::string family = preset_family(preset);
  std::string_view payload = preset_payload(preset);
  if (family == "zero") {
    return BeltramiCoefficient::from_field(ComplexField::zeros(grid), require_contractive);
  }
  if (family == "gaussian") {
    return BeltramiCoefficient::from_field(sample_gaussian_preset(payload, grid),
                                           require_contractive);
  }
  if (family == "radial") {
    return BeltramiCoefficient::from_field(sample_radial_preset(payload, grid),
                                           require_contractive);
  }
  if (family == "remark_q") {
    return BeltramiCoefficient::from_field(sample_remark_preset(payload, grid),
                                           require_contractive);
  }
  if (family == "reflect") {
    throw config_error("preset 'reflect' is only valid as mu2 of the bers command");
  }
  throw config_error("unknown preset family: '" + family + "'");
}

void run_experiment(const ExperimentConfig& cfg) {
  GridSpec grid = GridSpec::make(cfg.n, cfg.center, cfg.half_width);
  std::filesystem::path out{cfg.out};
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec) throw config_error("cannot create output directory " + out.string());
  auto plan = TransformPlan::make(grid, cfg.padding);

  ordered_json report;
  report["command"] = cfg.command;
  if (cfg.command == "solve") {
    run_solve(cfg, grid, plan, out, report);
  } else if (cfg.command == "theta") {
    run_theta(cfg, grid, plan, out, report);
  } else if (cfg.command == "holomorphy") {
    run_holomorphy(cfg, grid, plan, report);
  } else if (cfg.command == "develop") {
    run_develop(cfg, grid, plan, report);
  } else if (cfg.command == "estimate") {
    run_estimate(cfg, grid, out, report);
  } else if (cfg.command == "bers") {
    run_bers(cfg, grid, plan, out, report);
  } else if (cfg.command == "fixtures") {
    run_fixtures(cfg, grid, plan, report);
  } else if (cfg.command == "probe-np") {
    run_probe_np(cfg, plan, report);
  } else {
    throw config_error("unknown command: '" + cfg.command + "'");
  }

  write_text_file(out / "manifest.json", make_manifest(cfg).dump(2) + "\n");
  write_text_file(out / "report.json", report.dump(2) + "\n");
  write_text_file(out / "config.txt", cfg.serialize());
}

} // namespace beltrami
