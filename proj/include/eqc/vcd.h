// Copyright 2026 The eqcheck authors
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

#ifndef EQC_VCD_H
#define EQC_VCD_H

#include <cstdint>
#include <string>
#include <vector>

namespace eqc {

// One waveform: a value per frame, frames are consecutive from 0.
struct VcdVar {
  std::string name;
  unsigned width = 1;
  std::vector<uint64_t> frames;
};

struct VcdFile {
  std::string scope;
  std::vector<VcdVar> vars;
  unsigned nframes = 0;
};

// Renders the subset grammar: a 1ns timescale header, one scope, wire
// declarations, then per-frame binary value changes (values repeated
// only when they change).
std::string write_vcd(const std::string &scope,
                      const std::vector<VcdVar> &vars);

// Strict reader for exactly the subset write_vcd emits. Unchanged
// values are held across frames. Throws std::runtime_error with a
// line number on anything outside the subset.
VcdFile read_vcd(const std::string &text);

} // namespace eqc

#endif
