#include "rd/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "rd/errors.hpp"

namespace rd {

void ModelConfig::validate() const {
  if (!(gamma > -0.5 && gamma < 1.0))
    throw ConfigError("gamma must lie in (-1/2, 1), got " + std::to_string(gamma));
  if (!(delta > 0.0 && delta < 1.0 - gamma))
    throw ConfigError("delta must lie in (0, 1-gamma): gamma=" + std::to_string(gamma) +
                      " delta=" + std::to_string(delta));
  if (n_modes < 1) throw ConfigError("n_modes must be >= 1");
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (!(blowup_cap > 0.0)) throw ConfigError("blowup_cap must be positive");
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double x;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': cannot parse '" + v + "' as a number");
  }
  if (pos != v.size() || !std::isfinite(x))
    throw ConfigError("key '" + key + "': cannot parse '" + v + "' as a number");
  return x;
}

long parse_int(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  long x;
  try {
    x = std::stol(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': cannot parse '" + v + "' as an integer");
  }
  if (pos != v.size())
    throw ConfigError("key '" + key + "': cannot parse '" + v + "' as an integer");
  return x;
}

std::vector<double> parse_list(const std::string& key, std::string v) {
  v = trim(v);
  if (v.size() < 2 || v.front() != '[' || v.back() != ']')
    throw ConfigError("key '" + key + "': expected a [..] list");
  v = v.substr(1, v.size() - 2);
  std::vector<double> out;
  std::stringstream ss(v);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(parse_double(key, trim(tok)));
  return out;
}

}  // namespace

void apply_config_key(ModelConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "gamma") cfg.gamma = parse_double(key, value);
  else if (key == "delta") cfg.delta = parse_double(key, value);
  else if (key == "n_modes") cfg.n_modes = static_cast<int>(parse_int(key, value));
  else if (key == "dt") cfg.dt = parse_double(key, value);
  else if (key == "epsilon") cfg.epsilon = parse_double(key, value);
  else if (key == "seed") cfg.seed = static_cast<uint64_t>(parse_int(key, value));
  else if (key == "blowup_cap") cfg.blowup_cap = parse_double(key, value);
  else if (key == "p_coeffs") cfg.drift = OddPolynomial(parse_list(key, value));
  else throw ConfigError("unknown config key '" + key + "'");
}

ModelConfig parse_config(const std::string& text) {
  ModelConfig cfg;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    apply_config_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  cfg.validate();
  return cfg;
}

ModelConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace rd
