#include <cmath>
#include <fstream>
#include <sstream>

#include "sqz/cli.hpp"

namespace sqz::cli {

const std::vector<KeySpec>& config_reference() {
  static const std::vector<KeySpec> ref{
      {"atoms", "int", "10", "number of two-level atoms N"},
      {"alpha", "real", "3.3", "coherent amplitude of the preparation field"},
      {"photon_cut", "int", "-1", "photon cut n_max; -1 applies the default truncation rule"},
      {"prep_gt", "real", "1.0", "preparation time window in units of 1/g"},
      {"prep_samples", "int", "200", "samples over the preparation window"},
      {"input", "text", "sas", "atomic input of the radiation stage: sas or cas"},
      {"tilt", "real", "0", "tilt of the mean spin from -z before radiation"},
      {"squeeze_azimuth", "real", "0", "0 squeezes the azimuthal direction, pi/2 the polar one"},
      {"rad_gt", "real", "0.5", "radiation time window"},
      {"rad_samples", "int", "500", "samples over the radiation window"},
      {"snapshot_gt", "real", "-1", "radiation snapshot time; -1 takes the first minimum of min Var a_phi"},
      {"phase", "bool", "true", "evaluate the phase variance in radiation records"},
      {"qgrids", "bool", "true", "evaluate Q functions in tailor"},
      {"gamma_f", "real", "0", "cavity loss rate over g"},
      {"gamma_a", "real", "0", "collective atomic decay rate over g"},
      {"dt", "real", "0", "master-equation step; 0 selects the default"},
      {"tolerance", "real", "1e-6", "halving-gate tolerance on tracked moments"},
      {"gate", "bool", "true", "enable the step-halving gate"},
      {"alpha_lo", "real", "1", "alpha grid start"},
      {"alpha_hi", "real", "12", "alpha grid end"},
      {"alpha_step", "real", "0.1", "alpha grid step"},
      {"alpha_xtol", "real", "1e-3", "alpha refinement tolerance"},
      {"gt_samples", "int", "2000", "samples of the gt window when locating the first minimum"},
      {"window_u", "real", "8", "gt window in units of 1/sqrt(N + alpha^2)"},
      {"atoms_list", "int-list", "8,12,16,24,32,48,64,100", "atom counts for scaling and ranges"},
      {"sas_alpha", "real-list", "", "SAS amplitudes per atoms_list entry for ranges; empty optimizes"},
      {"sas_prep_gt", "real-list", "", "SAS preparation times per atoms_list entry for ranges"},
      {"tilt_step", "real", "pi/30", "tilt spacing of range families"},
      {"tilt_max", "real", "pi", "largest tilt of range families"},
      {"range_gt", "real", "1.0", "radiation window of range families"},
      {"range_samples", "int", "400", "samples per range trajectory"},
      {"bin_width", "real", "1", "envelope bin width in <n>"},
      {"gamma_f_lo", "real", "1e-3", "smallest gamma_f of the contour grid"},
      {"gamma_f_hi", "real", "1e-1", "largest gamma_f of the contour grid"},
      {"gamma_f_points", "int", "6", "log-spaced gamma_f points"},
      {"gamma_a_lo", "real", "1e-3", "smallest gamma_a of the contour grid"},
      {"gamma_a_hi", "real", "1e-1", "largest gamma_a of the contour grid"},
      {"gamma_a_points", "int", "6", "log-spaced gamma_a points"},
      {"contour_alpha_lo", "real", "2.5", "alpha bracket start for dissipative optimization"},
      {"contour_alpha_hi", "real", "4.5", "alpha bracket end for dissipative optimization"},
      {"prep_window", "real", "1.2", "longest dissipative preparation searched"},
      {"rad_window", "real", "2.0", "longest dissipative radiation searched"},
      {"sample_dt", "real", "0.005", "sample spacing of dissipative runs"},
      {"search_dt", "real", "0.005", "fixed step of the ungated alpha search"},
      {"nbar_list", "real-list", "0.5,1,2,5,10,20", "mean photon numbers for phase-min"},
      {"phase_cut", "int", "-1", "photon cut of phase-min; -1 doubles from 4 nbar + 40 until the tail mass is below 1e-12"},
      {"field_points", "int", "201", "field Q grid points per axis"},
      {"field_half_width", "real", "5", "field Q grid half width around <a>"},
      {"theta_points", "int", "181", "spin Q grid polar points"},
      {"phi_points", "int", "361", "spin Q grid azimuthal points"},
  };
  return ref;
}

namespace {

const KeySpec* find_key(const std::string& key) {
  for (const auto& k : config_reference())
    if (k.key == key) return &k;
  return nullptr;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double plain_number(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (...) {
    throw ParseError("not a number: '" + s + "'");
  }
  if (pos != s.size()) throw ParseError("not a number: '" + s + "'");
  return v;
}

void check_value(const KeySpec& k, const std::string& v) {
  if (k.type == "int" || k.type == "int-list") {
    const auto items = k.type == "int" ? std::vector<std::string>{v} : split_list(v);
    for (const auto& it : items) {
      std::size_t pos = 0;
      try {
        (void)std::stol(it, &pos);
      } catch (...) {
        pos = 0;
      }
      if (pos != it.size() || it.empty()) throw ParseError("key '" + k.key + "' expects an integer, got '" + it + "'");
    }
  } else if (k.type == "real" || k.type == "real-list") {
    const auto items = k.type == "real" ? std::vector<std::string>{v} : split_list(v);
    for (const auto& it : items) {
      try {
        (void)parse_real(it);
      } catch (const ParseError&) {
        throw ParseError("key '" + k.key + "' expects a number, got '" + it + "'");
      }
    }
  } else if (k.type == "bool") {
    if (v != "true" && v != "false" && v != "1" && v != "0")
      throw ParseError("key '" + k.key + "' expects true or false, got '" + v + "'");
  }
}

}  // namespace

double parse_real(const std::string& text) {
  const std::string s = trim(text);
  const auto p = s.find("pi");
  if (p == std::string::npos) return plain_number(s);
  double v = M_PI;
  std::string head = trim(s.substr(0, p)), tail = trim(s.substr(p + 2));
  if (!head.empty()) {
    if (head.back() != '*') throw ParseError("not a number: '" + s + "'");
    head.pop_back();
    v *= plain_number(trim(head));
  }
  if (!tail.empty()) {
    if (tail.front() != '/') throw ParseError("not a number: '" + s + "'");
    v /= plain_number(trim(tail.substr(1)));
  }
  return v;
}

Config Config::parse(const std::string& text) {
  Config c;
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
    if (eq == std::string::npos) throw ParseError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    const KeySpec* k = find_key(key);
    if (!k) throw ParseError("unknown key '" + key + "' on line " + std::to_string(lineno));
    if (c.values_.count(key)) throw ParseError("duplicate key '" + key + "' on line " + std::to_string(lineno));
    check_value(*k, value);
    c.values_[key] = value;
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string Config::raw(const std::string& key) const {
  const KeySpec* k = find_key(key);
  if (!k) throw ParseError("unknown key '" + key + "'");
  const auto it = values_.find(key);
  return it != values_.end() ? it->second : k->fallback;
}

std::string Config::text(const std::string& key) const { return raw(key); }
double Config::real(const std::string& key) const { return parse_real(raw(key)); }
int Config::integer(const std::string& key) const { return int(std::stol(raw(key))); }
bool Config::flag(const std::string& key) const {
  const std::string v = raw(key);
  return v == "true" || v == "1";
}

std::vector<double> Config::reals(const std::string& key) const {
  std::vector<double> out;
  for (const auto& it : split_list(raw(key))) out.push_back(parse_real(it));
  return out;
}

std::vector<int> Config::integers(const std::string& key) const {
  std::vector<int> out;
  for (const auto& it : split_list(raw(key))) out.push_back(int(std::stol(it)));
  return out;
}

std::vector<std::pair<std::string, std::string>> Config::echo() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& k : config_reference()) out.emplace_back(k.key, raw(k.key));
  return out;
}

}  // namespace sqz::cli
