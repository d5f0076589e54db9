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

#pragma once

/**
 * @file config.hpp
 * Flat "key = value" experiment configuration.
 *
 * Lines are `key = value`; `#` starts a comment; blank lines are ignored.
 * Every line is checked and all problems are reported together.
 */

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "declab/linalg.hpp"

namespace declab::cli {

enum class Subcommand {
  decouple_mc,
  decouple_exact,
  design_delta,
  moments_lemma5,
  entropy,
  prop1,
  apps_merging,
  apps_therm,
};

const char* subcommand_name(Subcommand s);
const std::vector<std::string>& subcommand_names();

using ConfigValue = std::variant<long long, std::uint64_t, double, bool, std::string, Dims>;

struct ExperimentConfig {
  Subcommand subcommand = Subcommand::prop1;
  std::map<std::string, ConfigValue> values;
  std::string out_path;  ///< empty means standard output

  bool has(const std::string& key) const { return values.count(key) != 0; }
  long long get_int(const std::string& key, long long fallback) const;
  std::uint64_t get_seed() const;
  double get_real(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  Dims get_dims(const std::string& key) const;
};

/// All problems found while parsing, one message per entry.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

/// One `key = value` assignment and where it came from.
struct Assignment {
  std::string key;
  std::string value;
  std::string origin;  ///< "line 3", "--set #1", ...
};

/// Splits config text into assignments; syntax and duplicate-key errors are
/// appended to `errors`.
std::vector<Assignment> split_config(const std::string& source, std::vector<std::string>& errors);

/// Parses and validates. Later assignments in `overrides` replace earlier ones
/// from `source` (used by `--set`).
ExperimentConfig parse_config(const std::string& source,
                              const std::vector<Assignment>& overrides = {});

/// "key=value" -> Assignment; throws ConfigError on malformed input.
Assignment parse_override(const std::string& text, int index);

/// Keys accepted by a subcommand, in documentation order.
std::vector<std::string> keys_for(Subcommand s);

}  // namespace declab::cli
