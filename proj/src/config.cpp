#include "chemcompass/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace chemcompass {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& tok, int line) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    fail(line, "expected a number, got '" + tok + "'");
  }
  if (pos != tok.size()) fail(line, "trailing characters in number '" + tok + "'");
  return v;
}

long parse_int(const std::string& tok, int line) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(tok, &pos);
  } catch (const std::exception&) {
    fail(line, "expected an integer, got '" + tok + "'");
  }
  if (pos != tok.size()) fail(line, "trailing characters in integer '" + tok + "'");
  return v;
}

bool parse_bool(const std::string& tok, int line) {
  std::string t = tok;
  std::transform(t.begin(), t.end(), t.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  fail(line, "expected a boolean (true/false), got '" + tok + "'");
}

std::vector<double> parse_list(const std::string& val, int line) {
  std::vector<double> out;
  std::string item;
  std::stringstream ss(val);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) fail(line, "empty element in list");
    out.push_back(parse_double(item, line));
  }
  if (out.empty()) fail(line, "empty list");
  return out;
}

std::vector<std::string> split_tokens(const std::string& s) {
  std::vector<std::string> toks;
  std::stringstream ss(s);
  std::string t;
  while (ss >> t) toks.push_back(t);
  return toks;
}

// nucleus = axial <a> [electron=N] [spin=S]
// nucleus = diagonal <tx> <ty> <tz> [electron=N] [spin=S]
// nucleus = tensor <9 row-major entries> [electron=N] [spin=S]
NucleusSpec parse_nucleus(const std::string& val, int line) {
  auto toks = split_tokens(val);
  if (toks.empty()) fail(line, "nucleus needs a form (axial/diagonal/tensor)");
  NucleusSpec spec;
  std::size_t i = 1;
  if (toks[0] == "axial") {
    if (toks.size() < 2) fail(line, "nucleus axial needs one coupling value");
    spec.hyperfine = HyperfineTensor::axial(parse_double(toks[1], line));
    i = 2;
  } else if (toks[0] == "diagonal") {
    if (toks.size() < 4) fail(line, "nucleus diagonal needs three values");
    spec.hyperfine = HyperfineTensor::diagonal(parse_double(toks[1], line),
                                               parse_double(toks[2], line),
                                               parse_double(toks[3], line));
    i = 4;
  } else if (toks[0] == "tensor") {
    if (toks.size() < 10) fail(line, "nucleus tensor needs nine values");
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c)
        spec.hyperfine.t(r, c) = parse_double(toks[1 + 3 * r + c], line);
    i = 10;
  } else {
    fail(line, "unknown nucleus form '" + toks[0] + "'");
  }
  for (; i < toks.size(); ++i) {
    auto eq = toks[i].find('=');
    if (eq == std::string::npos) fail(line, "expected key=value, got '" + toks[i] + "'");
    std::string k = toks[i].substr(0, eq), v = toks[i].substr(eq + 1);
    if (k == "electron")
      spec.hyperfine.electron = static_cast<int>(parse_int(v, line));
    else if (k == "spin")
      spec.spin = parse_double(v, line);
    else
      fail(line, "unknown nucleus option '" + k + "'");
  }
  return spec;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += fmt(v[i]);
  }
  return s;
}

const std::set<std::string> kModelKeys{"b_field_ut", "k_per_us", "gamma_per_us",
                                       "dephasing_d", "nucleus"};
const std::set<std::string> kRunKeys{
    "grid",        "full_theta",   "seed",          "jobs",         "theta_points",
    "scan_points", "scan_min",     "scan_max",      "scan_log",     "axis",
    "values",      "d_values",     "gamma_max",     "gamma_points", "curve_gammas",
    "contour",     "budget",       "restarts",      "control",      "terms",
    "segments",    "c_max_ut",     "omega_max",     "duration_us",  "optimize_target",
    "n_nuclei",    "tensor_form",  "lifetimes_us",  "optimize_a"};
const std::set<std::string> kOutputKeys{"out_dir", "precision"};

}  // namespace

ExperimentConfig default_config() {
  ExperimentConfig cfg;
  cfg.model.b_field_ut = 46.0;
  cfg.model.k = 0.5;
  NucleusSpec nuc;
  nuc.hyperfine = HyperfineTensor::axial(cfg.model.omega_b() / 3.0);
  cfg.model.nuclei = {nuc};
  return cfg;
}

void ExperimentConfig::validate() const {
  try {
    model.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
  auto check = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
  };
  check(grid >= 9, "grid must be at least 9");
  check(theta_points >= 5, "theta_points must be at least 5");
  check(jobs >= 0, "jobs must be non-negative");
  check(scan_points >= 2, "scan_points must be at least 2");
  check(scan_max > scan_min, "scan_max must exceed scan_min");
  check(!scan_log || scan_min > 0.0, "log spacing needs scan_min > 0");
  check(axis == "a" || axis == "b" || axis == "k" || axis == "gamma",
        "axis must be one of a, b, k, gamma");
  check(!d_values.empty(), "d_values must not be empty");
  check(gamma_points >= 2, "gamma_points must be at least 2");
  check(gamma_max > 0.0, "gamma_max must be positive");
  check(budget >= 1, "budget must be positive");
  check(restarts >= 1, "restarts must be positive");
  check(control == "harmonic" || control == "piecewise",
        "control must be harmonic or piecewise");
  check(terms >= 1, "terms must be positive");
  check(segments >= 1, "segments must be positive");
  check(c_max_ut >= 0.0, "c_max_ut must be non-negative");
  check(omega_max > 0.0, "omega_max must be positive");
  check(duration_us >= 0.0, "duration_us must be non-negative");
  check(optimize_target == "hyperfine" || optimize_target == "control",
        "optimize_target must be hyperfine or control");
  check(n_nuclei >= 1, "n_nuclei must be positive");
  check(tensor_form == "axial" || tensor_form == "diagonal",
        "tensor_form must be axial or diagonal");
  for (double tau : lifetimes_us) check(tau > 0.0, "lifetimes_us must be positive");
  check(precision >= 1 && precision <= 17, "precision must be in [1, 17]");
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg = default_config();
  bool nuclei_cleared = false;

  std::stringstream ss(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(ss, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::string line = trim(raw);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "model" && section != "run" && section != "output")
        fail(line_no, "unknown section [" + section + "]");
      continue;
    }

    auto eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty()) fail(line_no, "empty key");
    if (val.empty()) fail(line_no, "empty value for '" + key + "'");
    if (section.empty()) fail(line_no, "key '" + key + "' outside any section");

    if (section == "model") {
      if (!kModelKeys.count(key)) fail(line_no, "unknown [model] key '" + key + "'");
      if (key == "b_field_ut")
        cfg.model.b_field_ut = parse_double(val, line_no);
      else if (key == "k_per_us")
        cfg.model.k = parse_double(val, line_no);
      else if (key == "gamma_per_us")
        cfg.model.dephasing.gamma = parse_double(val, line_no);
      else if (key == "dephasing_d")
        cfg.model.dephasing.d = parse_double(val, line_no);
      else if (key == "nucleus") {
        if (!nuclei_cleared) {
          cfg.model.nuclei.clear();  // explicit nuclei replace the default one
          nuclei_cleared = true;
        }
        cfg.model.nuclei.push_back(parse_nucleus(val, line_no));
      }
    } else if (section == "run") {
      if (!kRunKeys.count(key)) fail(line_no, "unknown [run] key '" + key + "'");
      if (key == "grid")
        cfg.grid = static_cast<int>(parse_int(val, line_no));
      else if (key == "full_theta")
        cfg.full_theta = parse_bool(val, line_no);
      else if (key == "seed")
        cfg.seed = static_cast<std::uint64_t>(parse_int(val, line_no));
      else if (key == "jobs")
        cfg.jobs = static_cast<int>(parse_int(val, line_no));
      else if (key == "theta_points")
        cfg.theta_points = static_cast<int>(parse_int(val, line_no));
      else if (key == "scan_points")
        cfg.scan_points = static_cast<int>(parse_int(val, line_no));
      else if (key == "scan_min")
        cfg.scan_min = parse_double(val, line_no);
      else if (key == "scan_max")
        cfg.scan_max = parse_double(val, line_no);
      else if (key == "scan_log")
        cfg.scan_log = parse_bool(val, line_no);
      else if (key == "axis")
        cfg.axis = val;
      else if (key == "values")
        cfg.values = parse_list(val, line_no);
      else if (key == "d_values")
        cfg.d_values = parse_list(val, line_no);
      else if (key == "gamma_max")
        cfg.gamma_max = parse_double(val, line_no);
      else if (key == "gamma_points")
        cfg.gamma_points = static_cast<int>(parse_int(val, line_no));
      else if (key == "curve_gammas")
        cfg.curve_gammas = parse_list(val, line_no);
      else if (key == "contour")
        cfg.contour = parse_bool(val, line_no);
      else if (key == "budget")
        cfg.budget = static_cast<int>(parse_int(val, line_no));
      else if (key == "restarts")
        cfg.restarts = static_cast<int>(parse_int(val, line_no));
      else if (key == "control")
        cfg.control = val;
      else if (key == "terms")
        cfg.terms = static_cast<int>(parse_int(val, line_no));
      else if (key == "segments")
        cfg.segments = static_cast<int>(parse_int(val, line_no));
      else if (key == "c_max_ut")
        cfg.c_max_ut = parse_double(val, line_no);
      else if (key == "omega_max")
        cfg.omega_max = parse_double(val, line_no);
      else if (key == "duration_us")
        cfg.duration_us = parse_double(val, line_no);
      else if (key == "optimize_target")
        cfg.optimize_target = val;
      else if (key == "n_nuclei")
        cfg.n_nuclei = static_cast<int>(parse_int(val, line_no));
      else if (key == "tensor_form")
        cfg.tensor_form = val;
      else if (key == "lifetimes_us")
        cfg.lifetimes_us = parse_list(val, line_no);
      else if (key == "optimize_a")
        cfg.optimize_a = parse_bool(val, line_no);
    } else {  // output
      if (!kOutputKeys.count(key)) fail(line_no, "unknown [output] key '" + key + "'");
      if (key == "out_dir")
        cfg.out_dir = val;
      else if (key == "precision")
        cfg.precision = static_cast<int>(parse_int(val, line_no));
    }
  }

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string resolved_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "[model]\n";
  out << "b_field_ut = " << fmt(cfg.model.b_field_ut) << "\n";
  out << "k_per_us = " << fmt(cfg.model.k) << "\n";
  out << "gamma_per_us = " << fmt(cfg.model.dephasing.gamma) << "\n";
  out << "dephasing_d = " << fmt(cfg.model.dephasing.d) << "\n";
  for (const auto& n : cfg.model.nuclei) {
    out << "nucleus = tensor";
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) out << " " << fmt(n.hyperfine.t(r, c));
    out << " electron=" << n.hyperfine.electron << " spin=" << fmt(n.spin) << "\n";
  }
  out << "[run]\n";
  out << "grid = " << cfg.grid << "\n";
  out << "full_theta = " << (cfg.full_theta ? "true" : "false") << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "jobs = " << cfg.jobs << "\n";
  out << "theta_points = " << cfg.theta_points << "\n";
  out << "scan_points = " << cfg.scan_points << "\n";
  out << "scan_min = " << fmt(cfg.scan_min) << "\n";
  out << "scan_max = " << fmt(cfg.scan_max) << "\n";
  out << "scan_log = " << (cfg.scan_log ? "true" : "false") << "\n";
  out << "axis = " << cfg.axis << "\n";
  if (!cfg.values.empty()) out << "values = " << fmt_list(cfg.values) << "\n";
  out << "d_values = " << fmt_list(cfg.d_values) << "\n";
  out << "gamma_max = " << fmt(cfg.gamma_max) << "\n";
  out << "gamma_points = " << cfg.gamma_points << "\n";
  out << "curve_gammas = " << fmt_list(cfg.curve_gammas) << "\n";
  out << "contour = " << (cfg.contour ? "true" : "false") << "\n";
  out << "budget = " << cfg.budget << "\n";
  out << "restarts = " << cfg.restarts << "\n";
  out << "control = " << cfg.control << "\n";
  out << "terms = " << cfg.terms << "\n";
  out << "segments = " << cfg.segments << "\n";
  out << "c_max_ut = " << fmt(cfg.c_max_ut) << "\n";
  out << "omega_max = " << fmt(cfg.omega_max) << "\n";
  out << "duration_us = " << fmt(cfg.duration_us) << "\n";
  out << "optimize_target = " << cfg.optimize_target << "\n";
  out << "n_nuclei = " << cfg.n_nuclei << "\n";
  out << "tensor_form = " << cfg.tensor_form << "\n";
  out << "lifetimes_us = " << fmt_list(cfg.lifetimes_us) << "\n";
  out << "optimize_a = " << (cfg.optimize_a ? "true" : "false") << "\n";
  out << "[output]\n";
  out << "out_dir = " << cfg.out_dir << "\n";
  out << "precision = " << cfg.precision << "\n";
  return out.str();
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace chemcompass
