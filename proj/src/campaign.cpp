#include "rd/campaign.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "rd/errors.hpp"
#include "rd/geometry.hpp"
#include "rd/oracles.hpp"

namespace rd {
namespace {

using nlohmann::json;

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IntegrityError("cannot read artifact for checksum: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

json config_json(const ModelConfig& cfg) {
  return json{{"gamma", cfg.gamma},         {"delta", cfg.delta},
              {"n_modes", cfg.n_modes},     {"dt", cfg.dt},
              {"epsilon", cfg.epsilon},     {"p_coeffs", cfg.drift.coeffs()},
              {"seed", cfg.seed},           {"chain_id", cfg.chain_id},
              {"blowup_cap", cfg.blowup_cap}};
}

void write_manifest(const std::string& command, const json& params, const ModelConfig& cfg,
                    const std::string& started, const std::vector<std::string>& artifacts,
                    const std::string& manifest_path) {
  json outputs = json::array();
  for (const auto& path : artifacts) {
    const std::string bytes = read_file(path);
    outputs.push_back({{"path", path},
                       {"bytes", bytes.size()},
                       {"checksum", {{"algorithm", "fnv1a64"}, {"value", hex64(fnv1a64(bytes))}}}});
  }
  json manifest{{"code_version", kCodeVersion},
                {"command", command},
                {"parameters", params},
                {"config", config_json(cfg)},
                {"started", started},
                {"finished", iso_timestamp()},
                {"outputs", outputs}};
  std::ofstream out(manifest_path, std::ios::binary);
  if (!out) throw ConfigError("cannot open manifest path: " + manifest_path);
  out << manifest.dump(2) << '\n';
}

void write_text(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output path: " + path);
  out << body;
}

}  // namespace

std::vector<CylinderFunction> default_certify_dictionary(const SampleEnsemble& ens,
                                                         std::size_t dict_modes) {
  if (ens.samples.empty()) throw ConfigError("certification requires a non-empty ensemble");
  const std::size_t n = ens.meta.cfg.n_modes;
  const std::size_t m = std::min<std::size_t>(dict_modes, n);
  if (m == 0) throw ConfigError("certification dictionary needs at least one mode");

  auto mode_scale = [&](std::size_t j) {
    double s2 = 0.0;
    for (const auto& x : ens.samples) s2 += x.c[j - 1] * x.c[j - 1];
    s2 /= static_cast<double>(ens.samples.size());
    return s2 > 0.0 ? 1.0 / std::sqrt(s2) : 1.0;
  };
  std::vector<double> scale(m + 1, 0.0);
  for (std::size_t j = 1; j <= m; ++j) scale[j] = mode_scale(j);

  const double half_pi = std::numbers::pi / 2.0;
  const double quarter_pi = std::numbers::pi / 4.0;
  std::vector<CylinderFunction> dict;
  auto add = [&](const SpectralVector& lambda, double theta, const std::string& id) {
    dict.push_back(CylinderFunction::trig(lambda, theta, id));
  };
  for (std::size_t j = 1; j <= m; ++j) {
    SpectralVector lambda(n);
    lambda.c[j - 1] = scale[j];
    add(lambda, -half_pi, "sin_" + std::to_string(j));
    add(lambda, quarter_pi, "cos_" + std::to_string(j));
  }
  for (std::size_t a = 1; a <= m; ++a) {
    for (std::size_t b = a + 1; b <= m; ++b) {
      SpectralVector lambda(n);
      lambda.c[a - 1] = scale[a];
      lambda.c[b - 1] = scale[b];
      add(lambda, -half_pi, "sin_" + std::to_string(a) + "_" + std::to_string(b));
      add(lambda, quarter_pi, "cos_" + std::to_string(a) + "_" + std::to_string(b));
    }
  }
  return dict;
}

void run_sample(const ModelConfig& cfg, const SampleOptions& opt, const std::string& out_path) {
  const std::string started = iso_timestamp();
  if (opt.chains < 1) throw ConfigError("chains must be >= 1");
  const long burn_in = opt.burn_in >= 0 ? opt.burn_in : default_burn_in(cfg);
  const long thinning = opt.thinning > 0 ? opt.thinning : default_thinning(cfg);
  const long steps = opt.steps > 0 ? opt.steps : burn_in + 1000 * thinning;
  SampleEnsemble ens = sample_invariant(cfg, opt.chains, steps, burn_in, thinning);
  save_ensemble(ens, out_path);
  write_manifest("sample",
                 json{{"chains", opt.chains},
                      {"total_steps", steps},
                      {"burn_in", burn_in},
                      {"thinning", thinning},
                      {"output", out_path}},
                 cfg, started, {out_path}, out_path + ".manifest.json");
}

double run_certify(const SampleEnsemble& ens, const CertifyOptions& opt,
                   const std::string& out_csv, const std::string& out_json) {
  const std::string started = iso_timestamp();
  if (opt.k_min < 1 || opt.k_max < opt.k_min || opt.k_max > ens.meta.cfg.n_modes)
    throw ConfigError("certification mode range must satisfy 1 <= k_min <= k_max <= n_modes");
  std::vector<std::size_t> h_modes;
  for (std::size_t k = opt.k_min; k <= opt.k_max; ++k) h_modes.push_back(k);
  const auto dict = default_certify_dictionary(ens, opt.dict_modes);
  const CertificationTable table = certify_theorem2(ens, dict, h_modes, opt.p_exponent);

  std::ostringstream csv;
  csv << "phi_id,h_id,lhs,lhs_stderr,norm_phi_Lp,norm_h_strong,ratio\n";
  char line[512];
  for (const auto& row : table.rows) {
    std::snprintf(line, sizeof(line), "%s,e%zu,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  row.phi_id.c_str(), row.k, row.lhs, row.lhs_stderr, row.norm_phi_lp,
                  row.norm_h_strong, row.ratio);
    csv << line;
  }
  write_text(out_csv, csv.str());

  json summary{{"code_version", kCodeVersion},
               {"config", config_json(ens.meta.cfg)},
               {"p_exponent", opt.p_exponent},
               {"k_min", opt.k_min},
               {"k_max", opt.k_max},
               {"n_rows", table.rows.size()},
               {"sup_ratio", table.sup_ratio},
               {"sup_phi_id", table.sup_phi_id},
               {"sup_k", table.sup_k},
               {"table_csv", out_csv}};
  write_text(out_json, summary.dump(2) + "\n");
  write_manifest("certify-ibp",
                 json{{"p_exponent", opt.p_exponent},
                      {"k_min", opt.k_min},
                      {"k_max", opt.k_max},
                      {"dict_modes", opt.dict_modes}},
                 ens.meta.cfg, started, {out_csv, out_json}, out_json + ".manifest.json");
  return table.sup_ratio;
}

void run_surface(const SampleEnsemble& ens, const SurfaceOptions& opt,
                 const std::string& out_json) {
  const std::string started = iso_timestamp();
  const ModelConfig& cfg = ens.meta.cfg;
  LevelFunction g = LevelFunction::ball();
  if (opt.g_kind == "halfspace") {
    if (opt.halfspace_mode < 1 || opt.halfspace_mode > cfg.n_modes)
      throw ConfigError("halfspace mode out of range");
    SpectralVector b = SpectralVector::basis(opt.halfspace_mode, cfg.n_modes);
    g = LevelFunction::halfspace(b);
  } else if (opt.g_kind != "ball") {
    throw ConfigError("surface kind must be 'ball' or 'halfspace'");
  }

  double r = opt.r;
  if (!std::isfinite(r)) {
    // Default level: the median of g over the ensemble, a well-populated shell.
    std::vector<double> vals;
    vals.reserve(ens.samples.size());
    for (const auto& x : ens.samples) vals.push_back(g(x));
    std::nth_element(vals.begin(), vals.begin() + vals.size() / 2, vals.end());
    r = vals[vals.size() / 2];
  }
  ShellConfig shell = default_shell_config(ens, g);
  if (!opt.epsilons.empty()) shell.epsilons = opt.epsilons;
  const auto phi = CylinderFunction::constant(1.0, cfg.n_modes);
  const SurfaceReport rep = surface_integral(ens, g, phi, r, shell);

  json out{{"code_version", kCodeVersion},
           {"config", config_json(cfg)},
           {"g", rep.g_kind},
           {"r", rep.r},
           {"epsilons", rep.epsilons},
           {"shell_values", rep.shell_values},
           {"shell_stderr", rep.shell_stderr},
           {"shell_hits", rep.shell_hits},
           {"extrapolated", rep.extrapolated},
           {"stat_stderr", rep.stat_stderr},
           {"extrap_residual", rep.extrap_residual},
           {"cdf_diff_value", rep.cdf_diff_value},
           {"cdf_diff_stderr", rep.cdf_diff_stderr},
           {"agreement_flag", rep.agreement},
           {"degraded", rep.degraded}};
  write_text(out_json, out.dump(2) + "\n");
  write_manifest("surface",
                 json{{"g", opt.g_kind}, {"r", r}, {"halfspace_mode", opt.halfspace_mode}},
                 cfg, started, {out_json}, out_json + ".manifest.json");
}

bool run_oracle_compare(const SampleEnsemble& ens, const std::string& suite,
                        const std::string& out_json) {
  const std::string started = iso_timestamp();
  const ModelConfig& cfg = ens.meta.cfg;
  const std::size_t n_samples = ens.samples.size();
  if (n_samples == 0) throw ConfigError("oracle comparison requires a non-empty ensemble");
  json checks = json::array();
  bool all_pass = true;
  auto record = [&](const std::string& name, double value, double expected, double tolerance,
                    bool pass) {
    checks.push_back({{"check", name},
                      {"value", value},
                      {"expected", expected},
                      {"tolerance", tolerance},
                      {"pass", pass}});
    all_pass = all_pass && pass;
  };
  auto mode_samples = [&](std::size_t h) {
    std::vector<double> vals;
    vals.reserve(n_samples);
    for (const auto& x : ens.samples) vals.push_back(x.c[h - 1]);
    return vals;
  };

  if (suite == "gaussian") {
    if (!cfg.drift.is_zero())
      throw ConfigError("gaussian oracle suite requires a zero-drift ensemble");
    for (std::size_t h = 1; h <= cfg.n_modes; ++h) {
      const double target = oracles::ou_variance(h, cfg.gamma);
      const FunctionalEstimate est = estimate_functional(
          ens, [h](const SpectralVector& x) { return x.c[h - 1] * x.c[h - 1]; });
      record("variance_mode_" + std::to_string(h), est.mean, target, 3.0 * est.stderr_,
             std::abs(est.mean - target) <= 3.0 * est.stderr_);
      const FunctionalEstimate mu =
          estimate_functional(ens, [h](const SpectralVector& x) { return x.c[h - 1]; });
      record("mean_mode_" + std::to_string(h), mu.mean, 0.0, 4.0 * mu.stderr_,
             std::abs(mu.mean) <= 4.0 * mu.stderr_);
    }
    const double sigma1 = std::sqrt(oracles::ou_variance(1, cfg.gamma));
    auto vals = mode_samples(1);
    const double ks = oracles::ks_distance(
        vals, [&](double r) { return 0.5 * std::erfc(-r / (sigma1 * std::numbers::sqrt2)); });
    const double ks_tol = std::max(0.01, 1.95 / std::sqrt(static_cast<double>(vals.size())));
    record("ks_mode_1", ks, 0.0, ks_tol, ks <= ks_tol);
  } else if (suite == "one-mode") {
    if (cfg.n_modes != 1) throw ConfigError("one-mode oracle suite requires n_modes == 1");
    const oracles::OneModeDensity dens =
        oracles::one_mode_invariant_density(cfg.drift, cfg.gamma);
    auto vals = mode_samples(1);
    const double ks =
        oracles::ks_distance(vals, [&](double r) { return dens.cdf_at(r); });
    const double ks_tol = std::max(0.02, 2.5 / std::sqrt(static_cast<double>(vals.size())));
    record("ks_mode_1", ks, 0.0, ks_tol, ks <= ks_tol);
    const FunctionalEstimate mu =
        estimate_functional(ens, [](const SpectralVector& x) { return x.c[0]; });
    record("mean_mode_1", mu.mean, 0.0, 4.0 * mu.stderr_, std::abs(mu.mean) <= 4.0 * mu.stderr_);
  } else {
    throw ConfigError("unknown oracle suite: " + suite);
  }

  json out{{"code_version", kCodeVersion},
           {"config", config_json(cfg)},
           {"suite", suite},
           {"n_samples", n_samples},
           {"checks", checks},
           {"all_pass", all_pass}};
  write_text(out_json, out.dump(2) + "\n");
  write_manifest("oracle-compare", json{{"suite", suite}}, cfg, started, {out_json},
                 out_json + ".manifest.json");
  return all_pass;
}

}  // namespace rd
