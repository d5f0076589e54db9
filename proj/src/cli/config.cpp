// Copyright 2026 The declab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "declab/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <set>
#include <sstream>

#include "declab/decoupling.hpp"
#include "declab/entropies.hpp"

namespace declab::cli {

namespace {

using S = Subcommand;

enum class Kind { integer, seed, real, boolean, text, choice, dims, ensemble, cut };

struct KeySpec {
  const char* name;
  Kind kind;
  double lo = -INFINITY;
  double hi = INFINITY;
  bool lo_open = false;
  bool power_of_two = false;
  std::vector<std::string> choices;
  std::vector<Subcommand> used;  ///< empty: every subcommand
};

const std::vector<Subcommand> kAll = {};

const std::vector<KeySpec>& key_table() {
  static const std::vector<KeySpec> table = {
      {"subcommand", Kind::choice, -INFINITY, INFINITY, false, false, subcommand_names(), kAll},
      {"seed", Kind::seed, 0, INFINITY, false, false, {}, kAll},
      {"out", Kind::text, -INFINITY, INFINITY, false, false, {}, kAll},
      {"instance_id", Kind::text, -INFINITY, INFINITY, false, false, {}, {S::decouple_mc, S::decouple_exact}},
      {"instance", Kind::choice, -INFINITY, INFINITY, false, false,
       {"prop1", "random_pure", "file", "mixed"},
       {S::decouple_mc, S::decouple_exact, S::apps_merging, S::apps_therm}},
      {"ensemble", Kind::ensemble, -INFINITY, INFINITY, false, false, {}, {S::decouple_mc}},
      {"channel", Kind::choice, -INFINITY, INFINITY, false, false,
       {"partial_trace", "identity", "depolarizing"}, {S::decouple_mc, S::decouple_exact}},
      {"depolarizing_p", Kind::real, 0, 1, false, false, {}, {S::decouple_mc, S::decouple_exact}},
      {"n_qubits", Kind::integer, 1, 8, false, false, {},
       {S::decouple_mc, S::decouple_exact, S::design_delta, S::moments_lemma5}},
      {"ell", Kind::integer, 1, 64, false, false, {},
       {S::decouple_mc, S::decouple_exact, S::design_delta, S::moments_lemma5, S::apps_merging,
        S::apps_therm}},
      {"samples", Kind::integer, 2, 1e8, false, false, {}, {S::decouple_mc, S::prop1}},
      {"d1", Kind::integer, 2, 4096, false, true, {}, {S::decouple_mc, S::decouple_exact, S::prop1}},
      {"d2", Kind::integer, 2, 4096, false, true, {}, {S::decouple_mc, S::decouple_exact, S::prop1}},
      {"d_a", Kind::integer, 1, 4096, false, false, {}, {S::apps_merging}},
      {"d_b", Kind::integer, 1, 4096, false, false, {},
       {S::decouple_mc, S::decouple_exact, S::apps_merging}},
      {"d_r", Kind::integer, 1, 4096, false, false, {},
       {S::decouple_mc, S::decouple_exact, S::apps_merging, S::apps_therm}},
      {"d_s", Kind::integer, 1, 4096, false, false, {}, {S::apps_therm}},
      {"d_e", Kind::integer, 1, 4096, false, false, {}, {S::apps_therm}},
      {"state_file", Kind::text, -INFINITY, INFINITY, false, false, {},
       {S::decouple_mc, S::decouple_exact, S::entropy, S::apps_merging, S::apps_therm}},
      {"dims", Kind::dims, -INFINITY, INFINITY, false, false, {},
       {S::decouple_mc, S::decouple_exact, S::entropy, S::apps_merging, S::apps_therm}},
      {"cut", Kind::cut, -INFINITY, INFINITY, false, false, {}, {S::entropy}},
      {"quantity", Kind::choice, -INFINITY, INFINITY, false, false,
       {"h_min", "h_2", "h_2_plugin", "h_0", "h_max"}, {S::entropy}},
      {"optimizer_out", Kind::text, -INFINITY, INFINITY, false, false, {}, {S::entropy}},
      {"gap_tol", Kind::real, 0, 0.1, true, false, {}, {S::design_delta, S::entropy}},
      {"haar_mc", Kind::boolean, -INFINITY, INFINITY, false, false, {}, {S::prop1}},
      {"delta", Kind::real, 0, 1, true, false, {}, {S::apps_merging}},
      {"epsilon", Kind::real, 0, INFINITY, true, false, {}, {S::apps_merging}},
      {"delta_target", Kind::real, 0, INFINITY, true, false, {}, {S::apps_therm}},
      {"eps1", Kind::real, 0, INFINITY, false, false, {}, {S::apps_therm}},
      {"eps2", Kind::real, 0, INFINITY, false, false, {}, {S::apps_therm}},
      {"eps3", Kind::real, 0, INFINITY, false, false, {}, {S::apps_therm}},
      {"isometry_file", Kind::text, -INFINITY, INFINITY, false, false, {}, {S::apps_therm}},
      {"dump_circuits", Kind::text, -INFINITY, INFINITY, false, false, {}, {S::decouple_mc}},
  };
  return table;
}

const KeySpec* find_key(const std::string& name) {
  for (const KeySpec& k : key_table()) {
    if (name == k.name) return &k;
  }
  return nullptr;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
bool parse_whole(const std::string& text, T& out) {
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

bool parse_double(const std::string& text, double& out) {
  if (text.empty()) return false;
  char* end = nullptr;
  out = std::strtod(text.c_str(), &end);
  return end == text.c_str() + text.size() && std::isfinite(out);
}

std::string join(const std::vector<std::string>& items, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) s += sep;
    s += items[i];
  }
  return s;
}

std::string range_text(const KeySpec& k) {
  std::ostringstream os;
  os << (k.lo_open ? "(" : "[") << k.lo << ", " << k.hi << "]";
  return os.str();
}

// Returns an error message, or empty on success.
std::string convert(const KeySpec& k, const std::string& raw, ConfigValue& out) {
  const std::string key = k.name;
  switch (k.kind) {
    case Kind::integer: {
      long long v = 0;
      if (!parse_whole(raw, v)) return "key '" + key + "' expects an integer, got '" + raw + "'";
      if (v < k.lo || v > k.hi) {
        return "key '" + key + "' = " + raw + " is outside the range " + range_text(k);
      }
      if (k.power_of_two && !is_power_of_two(v)) {
        return "key '" + key + "' = " + raw + " must be a power of two";
      }
      out = v;
      return "";
    }
    case Kind::seed: {
      std::uint64_t v = 0;
      if (!parse_whole(raw, v)) {
        return "key '" + key + "' expects a non-negative 64-bit integer, got '" + raw + "'";
      }
      out = v;
      return "";
    }
    case Kind::real: {
      double v = 0.0;
      if (!parse_double(raw, v)) return "key '" + key + "' expects a real number, got '" + raw + "'";
      if (v < k.lo || v > k.hi || (k.lo_open && v == k.lo)) {
        return "key '" + key + "' = " + raw + " is outside the range " + range_text(k);
      }
      out = v;
      return "";
    }
    case Kind::boolean: {
      if (raw == "true" || raw == "1" || raw == "yes") {
        out = true;
      } else if (raw == "false" || raw == "0" || raw == "no") {
        out = false;
      } else {
        return "key '" + key + "' expects true or false, got '" + raw + "'";
      }
      return "";
    }
    case Kind::text:
      if (raw.empty()) return "key '" + key + "' must not be empty";
      out = raw;
      return "";
    case Kind::choice:
      if (std::find(k.choices.begin(), k.choices.end(), raw) == k.choices.end()) {
        return "key '" + key + "' = '" + raw + "' is not one of " + join(k.choices, ", ");
      }
      out = raw;
      return "";
    case Kind::dims: {
      Dims dims;
      std::stringstream ss(raw);
      std::string item;
      while (std::getline(ss, item, ',')) {
        int v = 0;
        if (!parse_whole(trim(item), v) || v < 1) {
          return "key '" + key + "' expects a comma-separated list of positive integers, got '" +
                 raw + "'";
        }
        dims.push_back(v);
      }
      if (dims.empty()) return "key '" + key + "' must not be empty";
      out = dims;
      return "";
    }
    case Kind::ensemble:
      if (raw != "d_ell") {
        try {
          parse_ensemble(raw);
        } catch (const std::exception& e) {
          return "key '" + key + "': " + e.what();
        }
      }
      out = raw;
      return "";
    case Kind::cut:
      try {
        parse_cut(raw);
      } catch (const std::exception& e) {
        return "key '" + key + "': " + e.what();
      }
      out = raw;
      return "";
  }
  return "key '" + key + "': unhandled type";
}

bool used_by(const KeySpec& k, Subcommand s) {
  return k.used.empty() || std::find(k.used.begin(), k.used.end(), s) != k.used.end();
}

// `attempted` holds every assigned key; ones that failed to convert are
// already reported and are not flagged again as missing.
void require(const ExperimentConfig& c, const std::set<std::string>& attempted,
             const std::vector<std::string>& keys, const std::string& why,
             std::vector<std::string>& errors) {
  for (const std::string& k : keys) {
    if (!c.has(k) && !attempted.count(k)) errors.push_back("missing required key '" + k + "' (" + why + ")");
  }
}

void check_subcommand(const ExperimentConfig& c, const std::set<std::string>& attempted,
                      std::vector<std::string>& errors) {
  const std::string sub = subcommand_name(c.subcommand);
  switch (c.subcommand) {
    case S::decouple_mc:
    case S::decouple_exact: {
      const std::string inst = c.get_string("instance", "prop1");
      if (inst == "prop1") {
        require(c, attempted, {"d1", "d2"}, "instance prop1", errors);
        if (c.has("channel")) errors.push_back("key 'channel' is fixed by instance prop1");
      } else if (inst == "random_pure") {
        require(c, attempted, {"n_qubits", "d_r"}, "instance random_pure", errors);
      } else if (inst == "file") {
        require(c, attempted, {"state_file", "dims"}, "instance file", errors);
        if (c.has("dims") && c.get_dims("dims").size() != 2) {
          errors.push_back("key 'dims' must list (d_A, d_R) for " + sub);
        }
      } else {
        errors.push_back("instance '" + inst + "' is not available for " + sub +
                         " (use prop1, random_pure or file)");
      }
      if (inst != "prop1" && c.get_string("channel", "partial_trace") == "partial_trace") {
        require(c, attempted, {"d_b"}, "partial_trace channel", errors);
      }
      if (c.has("depolarizing_p") && c.get_string("channel", "") != "depolarizing") {
        errors.push_back("key 'depolarizing_p' needs channel = depolarizing");
      }
      break;
    }
    case S::design_delta:
    case S::moments_lemma5:
      require(c, attempted, {"n_qubits", "ell"}, sub, errors);
      if (c.get_int("n_qubits", 1) > 3) {
        errors.push_back("key 'n_qubits' must be at most 3 for " + sub + " (memory guard)");
      }
      break;
    case S::entropy:
      require(c, attempted, {"state_file", "dims", "cut"}, sub, errors);
      break;
    case S::prop1:
      require(c, attempted, {"d1", "d2"}, sub, errors);
      break;
    case S::apps_merging: {
      require(c, attempted, {"ell", "delta"}, sub, errors);
      const std::string inst = c.get_string("instance", "random_pure");
      if (inst == "random_pure") {
        require(c, attempted, {"d_a", "d_b", "d_r"}, "instance random_pure", errors);
      } else if (inst == "file") {
        require(c, attempted, {"state_file", "dims"}, "instance file", errors);
        if (c.has("dims") && c.get_dims("dims").size() != 3) {
          errors.push_back("key 'dims' must list (d_A, d_B, d_R) for " + sub);
        }
      } else {
        errors.push_back("instance '" + inst + "' is not available for " + sub +
                         " (use random_pure or file)");
      }
      break;
    }
    case S::apps_therm: {
      require(c, attempted, {"d_s", "d_e", "d_r", "ell", "eps1", "delta_target"}, sub, errors);
      const std::string inst = c.get_string("instance", "mixed");
      if (inst == "file") {
        require(c, attempted, {"state_file", "dims"}, "instance file", errors);
      } else if (inst != "mixed") {
        errors.push_back("instance '" + inst + "' is not available for " + sub +
                         " (use mixed or file)");
      }
      const double e1 = c.get_real("eps1", 0.0), e2 = c.get_real("eps2", 0.0),
                   e3 = c.get_real("eps3", 0.0);
      if (c.has("eps1") && !(e1 > e2 + e3)) errors.push_back("need eps1 > eps2 + eps3");
      if (c.has("eps1") && c.has("delta_target") && !(c.get_real("delta_target", 0.0) - 24 * e1 > 0)) {
        errors.push_back("need delta_target - 24 eps1 > 0");
      }
      break;
    }
  }
}

}  // namespace

const char* subcommand_name(Subcommand s) {
  switch (s) {
    case S::decouple_mc: return "decouple-mc";
    case S::decouple_exact: return "decouple-exact";
    case S::design_delta: return "design-delta";
    case S::moments_lemma5: return "moments-lemma5";
    case S::entropy: return "entropy";
    case S::prop1: return "prop1";
    case S::apps_merging: return "apps-merging";
    case S::apps_therm: return "apps-therm";
  }
  return "?";
}

const std::vector<std::string>& subcommand_names() {
  static const std::vector<std::string> names = {
      "decouple-mc", "decouple-exact", "design-delta", "moments-lemma5",
      "entropy",     "prop1",          "apps-merging", "apps-therm"};
  return names;
}

long long ExperimentConfig::get_int(const std::string& key, long long fallback) const {
  const auto it = values.find(key);
  return it == values.end() ? fallback : std::get<long long>(it->second);
}

std::uint64_t ExperimentConfig::get_seed() const {
  const auto it = values.find("seed");
  return it == values.end() ? 0 : std::get<std::uint64_t>(it->second);
}

double ExperimentConfig::get_real(const std::string& key, double fallback) const {
  const auto it = values.find(key);
  return it == values.end() ? fallback : std::get<double>(it->second);
}

bool ExperimentConfig::get_bool(const std::string& key, bool fallback) const {
  const auto it = values.find(key);
  return it == values.end() ? fallback : std::get<bool>(it->second);
}

std::string ExperimentConfig::get_string(const std::string& key,
                                         const std::string& fallback) const {
  const auto it = values.find(key);
  return it == values.end() ? fallback : std::get<std::string>(it->second);
}

Dims ExperimentConfig::get_dims(const std::string& key) const {
  const auto it = values.find(key);
  return it == values.end() ? Dims{} : std::get<Dims>(it->second);
}

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error(join(errors, "\n")), errors_(std::move(errors)) {}

std::vector<Assignment> split_config(const std::string& source, std::vector<std::string>& errors) {
  std::vector<Assignment> out;
  std::map<std::string, std::string> first_seen;
  std::istringstream in(source);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string origin = "line " + std::to_string(lineno);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back(origin + ": expected 'key = value', got '" + line + "'");
      continue;
    }
    Assignment a{trim(line.substr(0, eq)), trim(line.substr(eq + 1)), origin};
    if (a.key.empty()) {
      errors.push_back(origin + ": empty key");
      continue;
    }
    const auto [it, fresh] = first_seen.emplace(a.key, origin);
    if (!fresh) {
      errors.push_back("duplicate key '" + a.key + "' on " + it->second + " and " + origin);
      continue;
    }
    out.push_back(std::move(a));
  }
  return out;
}

Assignment parse_override(const std::string& text, int index) {
  const auto eq = text.find('=');
  const std::string origin = "--set #" + std::to_string(index);
  if (eq == std::string::npos || trim(text.substr(0, eq)).empty()) {
    throw ConfigError({origin + ": expected key=value, got '" + text + "'"});
  }
  return {trim(text.substr(0, eq)), trim(text.substr(eq + 1)), origin};
}

ExperimentConfig parse_config(const std::string& source, const std::vector<Assignment>& overrides) {
  std::vector<std::string> errors;
  std::vector<Assignment> merged = split_config(source, errors);
  std::map<std::string, std::string> override_seen;
  for (const Assignment& o : overrides) {
    const auto [it, fresh] = override_seen.emplace(o.key, o.origin);
    if (!fresh) {
      errors.push_back("duplicate key '" + o.key + "' on " + it->second + " and " + o.origin);
      continue;
    }
    auto pos = std::find_if(merged.begin(), merged.end(),
                            [&](const Assignment& a) { return a.key == o.key; });
    if (pos != merged.end()) {
      *pos = o;
    } else {
      merged.push_back(o);
    }
  }

  ExperimentConfig cfg;
  std::optional<Subcommand> sub;
  for (const Assignment& a : merged) {
    if (a.key != "subcommand") continue;
    const auto& names = subcommand_names();
    const auto it = std::find(names.begin(), names.end(), a.value);
    if (it == names.end()) {
      errors.push_back(a.origin + ": key 'subcommand' = '" + a.value + "' is not one of " +
                       join(names, ", "));
    } else {
      sub = static_cast<Subcommand>(it - names.begin());
    }
  }
  if (!sub && std::none_of(merged.begin(), merged.end(),
                           [](const Assignment& a) { return a.key == "subcommand"; })) {
    errors.push_back("missing required key 'subcommand'");
  }

  for (const Assignment& a : merged) {
    const KeySpec* entry = find_key(a.key);
    if (!entry) {
      errors.push_back(a.origin + ": unknown key '" + a.key + "'");
      continue;
    }
    if (a.key == "subcommand") continue;
    ConfigValue v;
    const std::string msg = convert(*entry, a.value, v);
    if (!msg.empty()) {
      errors.push_back(a.origin + ": " + msg);
      continue;
    }
    if (sub && !used_by(*entry, *sub)) {
      errors.push_back(a.origin + ": key '" + a.key + "' is not used by subcommand " +
                       subcommand_name(*sub));
      continue;
    }
    cfg.values[a.key] = v;
  }

  if (sub) {
    cfg.subcommand = *sub;
    std::set<std::string> attempted;
    for (const Assignment& a : merged) attempted.insert(a.key);
    check_subcommand(cfg, attempted, errors);
  }
  if (!errors.empty()) throw ConfigError(std::move(errors));
  if (cfg.has("out")) cfg.out_path = cfg.get_string("out", "");
  return cfg;
}

std::vector<std::string> keys_for(Subcommand s) {
  std::vector<std::string> keys;
  for (const KeySpec& k : key_table()) {
    if (used_by(k, s)) keys.emplace_back(k.name);
  }
  return keys;
}

}  // namespace declab::cli
