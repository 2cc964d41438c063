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

#ifndef EQC_DIMACS_H
#define EQC_DIMACS_H

#include <iosfwd>
#include <string>
#include <vector>

#include "eqc/solver.h"

namespace eqc {

// CnfSink that records the formula; optionally forwards everything to
// a second sink so a problem can be solved and exported in one pass.
class CnfRecorder final : public CnfSink {
public:
  explicit CnfRecorder(CnfSink *tee = nullptr) : tee_(tee) {}

  using CnfSink::add_clause;
  int new_var() override {
    if (tee_) tee_->new_var();
    return ++nvars_;
  }
  void add_clause(const int *lits, size_t n) override {
    if (tee_) tee_->add_clause(lits, n);
    clauses_.emplace_back(lits, lits + n);
  }

  int num_vars() const { return nvars_; }
  const std::vector<std::vector<int>> &clauses() const { return clauses_; }

  void write_dimacs(std::ostream &os,
                    const std::vector<std::string> &comments = {}) const;

private:
  int nvars_ = 0;
  CnfSink *tee_;
  std::vector<std::vector<int>> clauses_;
};

bool parse_dimacs(std::istream &is, int &num_vars,
                  std::vector<std::vector<int>> &clauses, std::string &err);

} // namespace eqc

#endif
