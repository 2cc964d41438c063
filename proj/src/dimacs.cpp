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

#include "eqc/dimacs.h"

#include <istream>
#include <ostream>
#include <sstream>

namespace eqc {

void CnfRecorder::write_dimacs(std::ostream &os,
                               const std::vector<std::string> &comments) const {
  for (const auto &c : comments) os << "c " << c << "\n";
  os << "p cnf " << nvars_ << " " << clauses_.size() << "\n";
  for (const auto &cls : clauses_) {
    for (int l : cls) os << l << " ";
    os << "0\n";
  }
}

bool parse_dimacs(std::istream &is, int &num_vars,
                  std::vector<std::vector<int>> &clauses, std::string &err) {
  num_vars = 0;
  clauses.clear();
  int num_clauses = -1;
  std::string line;
  std::vector<int> cur;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == 'c') continue;
    std::istringstream ls(line);
    if (line[0] == 'p') {
      std::string p, cnf;
      if (!(ls >> p >> cnf >> num_vars >> num_clauses) || cnf != "cnf") {
        err = "malformed problem line: " + line;
        return false;
      }
      continue;
    }
    int lit;
    while (ls >> lit) {
      if (lit == 0) {
        clauses.push_back(cur);
        cur.clear();
      } else {
        if (lit > num_vars || -lit > num_vars) {
          err = "literal out of range: " + std::to_string(lit);
          return false;
        }
        cur.push_back(lit);
      }
    }
  }
  if (!cur.empty()) {
    err = "unterminated clause";
    return false;
  }
  if (num_clauses >= 0 && (int)clauses.size() != num_clauses) {
    err = "clause count mismatch";
    return false;
  }
  return true;
}

} // namespace eqc
