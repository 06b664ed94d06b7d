#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "shs6v/errors.hpp"
#include "shs6v/experiments.hpp"

namespace shs6v {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T number(const std::string& key, const std::string& v) {
  std::istringstream is(v);
  T x{};
  is >> x;
  if (is.fail() || !is.eof()) throw ParameterError("config: bad value for " + key + ": '" + v + "'");
  return x;
}

template <class T>
std::vector<T> list(const std::string& key, const std::string& v) {
  std::vector<T> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(number<T>(key, item));
  }
  return out;
}

bool boolean(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  throw ParameterError("config: bad boolean for " + key + ": '" + v + "'");
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::ostringstream os;
  os.precision(17);
  for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig c;
  std::istringstream in(text);
  std::string line;
  int ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ParameterError("config line " + std::to_string(ln) + ": expected key=value");
    std::string k = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
    if (k == "I") c.I = number<int>(k, v);
    else if (k == "J") c.J = number<int>(k, v);
    else if (k == "b") c.b = number<double>(k, v);
    else if (k == "rho") c.rho = number<double>(k, v);
    else if (k == "eps") c.eps = list<double>(k, v);
    else if (k == "steps") c.steps = number<long>(k, v);
    else if (k == "times") c.times = list<long>(k, v);
    else if (k == "replicas") c.replicas = number<long>(k, v);
    else if (k == "seed") c.seed = number<std::uint64_t>(k, v);
    else if (k == "sites") c.sites = number<long>(k, v);
    else if (k == "horizon") c.horizon = number<double>(k, v);
    else if (k == "records") c.records = boolean(k, v);
    else if (k == "csv") c.csv = v;
    else if (k == "json") c.json = v;
    else throw ParameterError("config line " + std::to_string(ln) + ": unknown key '" + k + "'");
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IOError("cannot read config " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_text(const ExperimentConfig& c) {
  std::ostringstream os;
  os.precision(17);
  os << "I = " << c.I << "\nJ = " << c.J << "\nb = " << c.b << "\nrho = " << c.rho << "\neps = " << join(c.eps)
     << "\nsteps = " << c.steps << "\ntimes = " << join(c.times) << "\nreplicas = " << c.replicas
     << "\nseed = " << c.seed << "\nsites = " << c.sites << "\nhorizon = " << c.horizon
     << "\nrecords = " << (c.records ? 1 : 0) << "\ncsv = " << c.csv << "\njson = " << c.json << "\n";
  return os.str();
}

std::string config_to_json(const ExperimentConfig& c) {
  nlohmann::ordered_json j;
  j["I"] = c.I;
  j["J"] = c.J;
  j["b"] = c.b;
  j["rho"] = c.rho;
  j["eps"] = c.eps;
  j["steps"] = c.steps;
  j["times"] = c.times;
  j["replicas"] = c.replicas;
  j["seed"] = c.seed;
  j["sites"] = c.sites;
  j["horizon"] = c.horizon;
  j["records"] = c.records;
  j["csv"] = c.csv;
  j["json"] = c.json;
  return j.dump(2);
}

ExperimentConfig config_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
    // accept a full scan report as well as a bare config object
    if (j.contains("config")) j = j["config"];
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("config json: ") + e.what());
  }
  std::ostringstream os;
  os.precision(17);
  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto& v = it.value();
    os << it.key() << " = ";
    if (v.is_array()) {
      for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i].dump();
    } else if (v.is_string()) {
      os << v.get<std::string>();
    } else if (v.is_boolean()) {
      os << (v.get<bool>() ? 1 : 0);
    } else {
      os << v.dump();
    }
    os << "\n";
  }
  return parse_config(os.str());
}

void validate(const ExperimentConfig& c) {
  if (c.eps.empty()) throw ParameterError("config: eps list is empty");
  if (c.steps < 0) throw ParameterError("config: steps must be >= 0");
  if (c.replicas < 0) throw ParameterError("config: replicas must be >= 0");
  if (c.sites < 0) throw ParameterError("config: sites must be >= 0");
  for (double e : c.eps) {
    ModelParams p = ModelParams::make_scaled(c.I, c.J, c.b, c.rho, e);
    p.require_condition1();
    if (e * e * double(c.steps) > c.horizon)
      throw ParameterError("config: eps^2 * steps = " + std::to_string(e * e * double(c.steps)) +
                           " exceeds horizon " + std::to_string(c.horizon));
  }
  for (long t : c.times)
    if (t < 0 || t > c.steps) throw ParameterError("config: sample time outside [0, steps]");
}

std::vector<long> sample_times(const ExperimentConfig& c) {
  std::vector<long> t = c.times;
  if (t.empty()) t = {0, c.steps / 4, c.steps / 2, c.steps};
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

}  // namespace shs6v
