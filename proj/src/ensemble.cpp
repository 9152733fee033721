#include "rd/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rd/dynamics.hpp"
#include "rd/errors.hpp"

namespace rd {

long default_burn_in(const ModelConfig& cfg) {
  return static_cast<long>(std::ceil(10.0 / (eigenvalue(1) * cfg.dt)));
}

long default_thinning(const ModelConfig& cfg) {
  // mode-1 lag autocorrelation e^{-alpha_1 k dt} < 0.1
  return static_cast<long>(std::ceil(std::log(10.0) / (eigenvalue(1) * cfg.dt)));
}

SampleEnsemble sample_invariant(const ModelConfig& cfg, int chains, long steps,
                                long burn_in, long thinning) {
  cfg.validate();
  if (chains < 1) throw ConfigError("chains must be >= 1");
  if (burn_in < 0 || thinning < 1 || steps <= burn_in)
    throw ConfigError("need steps > burn_in >= 0 and thinning >= 1");

  SampleEnsemble ens;
  ens.meta = {cfg, chains, steps, burn_in, thinning, 1};
  const long per_chain = (steps - burn_in) / thinning;
  ens.samples.reserve(static_cast<std::size_t>(per_chain) * chains);

  for (int c = 0; c < chains; ++c) {
    ModelConfig ccfg = cfg;
    ccfg.chain_id = cfg.chain_id + c;
    Integrator integ(ccfg);
    SpectralVector x(static_cast<std::size_t>(cfg.n_modes));
    for (long k = 0; k < steps; ++k) {
      const NoiseIncrement dW = integ.draw_noise(k);
      try {
        integ.step_spde(x, dW);
        if (!x.finite() ||
            std::fabs(*std::max_element(x.c.begin(), x.c.end(),
                                        [](double a, double b) {
                                          return std::fabs(a) < std::fabs(b);
                                        })) > cfg.blowup_cap)
          throw BlowUpError("blow-up", k, ccfg.chain_id);
      } catch (const BlowUpError& e) {
        throw BlowUpError("chain " + std::to_string(ccfg.chain_id) + " blew up at step " +
                              std::to_string(e.step),
                          e.step, ccfg.chain_id);
      }
      const long s = k + 1;
      if (s > burn_in && (s - burn_in) % thinning == 0) ens.samples.push_back(x);
    }
  }
  return ens;
}

namespace {

// Batch means over one contiguous series; returns (sum, sum of sq batch
// deviations contribution) pooled by the caller.
struct SeriesStats {
  double mean = 0.0;
  double var_of_mean = 0.0;  // squared stderr of this series' mean
  double n_eff = 0.0;
  std::size_t n = 0;
};

SeriesStats series_stats(const double* v, std::size_t n) {
  SeriesStats st;
  st.n = n;
  if (n == 0) return st;
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m += v[i];
  m /= static_cast<double>(n);
  st.mean = m;
  if (n == 1) return st;

  const std::size_t nb = std::max<std::size_t>(2, static_cast<std::size_t>(std::sqrt(n)));
  const std::size_t bs = n / nb;
  double bvar = 0.0;
  for (std::size_t b = 0; b < nb; ++b) {
    double bm = 0.0;
    for (std::size_t i = b * bs; i < (b + 1) * bs; ++i) bm += v[i];
    bm /= static_cast<double>(bs);
    bvar += (bm - m) * (bm - m);
  }
  bvar /= static_cast<double>(nb - 1);
  st.var_of_mean = bvar / static_cast<double>(nb);

  // integrated autocorrelation with an initial-positive-sequence cutoff
  double var0 = 0.0;
  for (std::size_t i = 0; i < n; ++i) var0 += (v[i] - m) * (v[i] - m);
  var0 /= static_cast<double>(n);
  double tau = 1.0;
  if (var0 > 0.0) {
    const std::size_t maxlag = std::min<std::size_t>(n / 2, 1000);
    for (std::size_t lag = 1; lag <= maxlag; ++lag) {
      double c = 0.0;
      for (std::size_t i = 0; i + lag < n; ++i) c += (v[i] - m) * (v[i + lag] - m);
      c /= static_cast<double>(n - lag) * var0;
      if (c <= 0.0) break;
      tau += 2.0 * c;
    }
  }
  st.n_eff = static_cast<double>(n) / tau;
  return st;
}

FunctionalEstimate pool_chains(const std::vector<double>& values, int chains) {
  FunctionalEstimate est;
  const std::size_t n = values.size();
  if (n == 0) throw std::invalid_argument("estimate over empty ensemble");
  if (chains < 1 || n % static_cast<std::size_t>(chains) != 0) chains = 1;
  const std::size_t per = n / static_cast<std::size_t>(chains);

  double mean = 0.0, var = 0.0, neff = 0.0;
  for (int c = 0; c < chains; ++c) {
    const SeriesStats st = series_stats(values.data() + per * static_cast<std::size_t>(c), per);
    mean += st.mean;
    var += st.var_of_mean;
    neff += st.n_eff;
  }
  const double k = static_cast<double>(chains);
  est.mean = mean / k;
  est.stderr_ = std::sqrt(var) / k;
  est.n_eff = neff;
  return est;
}

}  // namespace

FunctionalEstimate estimate_scalar_series(const std::vector<double>& values) {
  return pool_chains(values, 1);
}

FunctionalEstimate estimate_functional(const SampleEnsemble& ens,
                                       const std::function<double(const SpectralVector&)>& phi) {
  std::vector<double> vals;
  vals.reserve(ens.size());
  for (const auto& s : ens.samples) vals.push_back(phi(s));
  return pool_chains(vals, ens.meta.chains);
}

FunctionalEstimate estimate_moment(const SampleEnsemble& ens, int m) {
  if (m < 1) throw std::invalid_argument("estimate_moment: m >= 1 required");
  return estimate_functional(
      ens, [m](const SpectralVector& x) { return std::pow(sobolev_norm(0.0, x), m); });
}

uint64_t fnv1a64(const std::string& bytes) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void save_ensemble(const SampleEnsemble& ens, const std::string& path) {
  nlohmann::json hdr;
  const ModelConfig& c = ens.meta.cfg;
  hdr["format_version"] = ens.meta.format_version;
  hdr["gamma"] = c.gamma;
  hdr["delta"] = c.delta;
  hdr["n_modes"] = c.n_modes;
  hdr["dt"] = c.dt;
  hdr["epsilon"] = c.epsilon;
  hdr["p_coeffs"] = c.drift.coeffs();
  hdr["seed"] = c.seed;
  hdr["base_chain_id"] = c.chain_id;
  hdr["blowup_cap"] = c.blowup_cap;
  hdr["chains"] = ens.meta.chains;
  hdr["total_steps"] = ens.meta.total_steps;
  hdr["burn_in"] = ens.meta.burn_in;
  hdr["thinning"] = ens.meta.thinning;
  hdr["rows"] = ens.samples.size();
  hdr["checksum"] = "fnv1a64";

  std::string body;
  for (const auto& s : ens.samples) {
    for (std::size_t i = 0; i < s.n_modes(); ++i) {
      if (i) body += ',';
      body += fmt17(s.c[i]);
    }
    body += '\n';
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  char hex[20];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a64(body)));
  out << hdr.dump() << '\n' << body << "# fnv1a64 " << hex << '\n';
  if (!out) throw std::runtime_error("write failure on '" + path + "'");
}

SampleEnsemble load_ensemble(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open ensemble file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw IntegrityError("empty ensemble file '" + path + "'");

  nlohmann::json hdr;
  try {
    hdr = nlohmann::json::parse(line);
  } catch (const std::exception& e) {
    throw IntegrityError("bad ensemble header: " + std::string(e.what()));
  }
  SampleEnsemble ens;
  try {
    ens.meta.format_version = hdr.at("format_version").get<int>();
    if (ens.meta.format_version != 1)
      throw IntegrityError("unsupported ensemble format version " +
                           std::to_string(ens.meta.format_version));
    ModelConfig& c = ens.meta.cfg;
    c.gamma = hdr.at("gamma").get<double>();
    c.delta = hdr.at("delta").get<double>();
    c.n_modes = hdr.at("n_modes").get<int>();
    c.dt = hdr.at("dt").get<double>();
    c.epsilon = hdr.at("epsilon").get<double>();
    c.drift = OddPolynomial(hdr.at("p_coeffs").get<std::vector<double>>());
    c.seed = hdr.at("seed").get<uint64_t>();
    c.chain_id = hdr.at("base_chain_id").get<int>();
    c.blowup_cap = hdr.at("blowup_cap").get<double>();
    ens.meta.chains = hdr.at("chains").get<int>();
    ens.meta.total_steps = hdr.at("total_steps").get<long>();
    ens.meta.burn_in = hdr.at("burn_in").get<long>();
    ens.meta.thinning = hdr.at("thinning").get<long>();
  } catch (const nlohmann::json::exception& e) {
    throw IntegrityError("bad ensemble header: " + std::string(e.what()));
  }

  const std::size_t rows = hdr.at("rows").get<std::size_t>();
  const std::size_t n = static_cast<std::size_t>(ens.meta.cfg.n_modes);
  std::string body;
  std::string checksum_line;
  while (std::getline(in, line)) {
    if (line.rfind("# fnv1a64 ", 0) == 0) {
      checksum_line = line;
      break;
    }
    body += line;
    body += '\n';
    SpectralVector v(n);
    std::size_t i = 0, pos = 0;
    while (i < n) {
      const auto comma = line.find(',', pos);
      const std::string tok = line.substr(pos, comma == std::string::npos ? std::string::npos
                                                                          : comma - pos);
      try {
        v.c[i] = std::stod(tok);
      } catch (const std::exception&) {
        throw IntegrityError("unparseable value in row " + std::to_string(ens.samples.size()));
      }
      ++i;
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (i != n || line.find(',', pos) != std::string::npos)
      throw IntegrityError("row " + std::to_string(ens.samples.size()) + " has wrong width");
    if (!v.finite())
      throw IntegrityError("non-finite value in row " + std::to_string(ens.samples.size()));
    ens.samples.push_back(std::move(v));
  }
  if (ens.samples.size() != rows)
    throw IntegrityError("ensemble truncated: header says " + std::to_string(rows) +
                         " rows, found " + std::to_string(ens.samples.size()));
  if (checksum_line.empty()) throw IntegrityError("missing checksum line");
  char hex[20];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a64(body)));
  if (checksum_line != std::string("# fnv1a64 ") + hex)
    throw IntegrityError("checksum mismatch: ensemble file is corrupted");
  return ens;
}

}  // namespace rd
