// Copyright 2026 The ASAS Authors.
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

// Command-line front end: build-vocab, train, rank, summarize, eval-sum,
// eval-rank, transfer, synth.
//
// Config precedence: flags > --config file > $ASAS_CONFIG file > defaults.
// Failures print one JSON error record on `err` and return nonzero.

#pragma once

#include <ostream>

namespace asas::cli {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,  // unknown command, bad flag, config schema violation
  kData = 3,
  kCheckpoint = 4,
  kTraining = 5,
};

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace asas::cli
