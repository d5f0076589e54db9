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
 * @file runner.hpp
 * Executes one parsed experiment configuration.
 *
 * Exit codes: 0 success, 1 a checked inequality failed (some PASS field is
 * false), 2 usage or input error. CSV goes to `csv`; the one-line summary goes
 * to `summary`.
 */

#include <iosfwd>

#include "declab/cli/config.hpp"

namespace declab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitUsage = 2;

/// Stream index used for instance construction (random states, channels), kept
/// far from the per-sample Monte-Carlo streams 0, 1, 2, ...
inline constexpr std::uint64_t kInstanceStream = 1ULL << 63;

struct RunIo {
  std::ostream& csv;
  std::ostream& summary;
  std::ostream& err;
  std::ostream* circuits = nullptr;  ///< `dump_circuits` target, if any
};

int run(const ExperimentConfig& cfg, RunIo& io);

/// CSV header for a subcommand, without the trailing newline.
std::string csv_header(Subcommand s);

}  // namespace declab::cli
