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

#include "eqc/vcd.h"

#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace eqc {

namespace {

// Identifier codes use the printable range '!'..'~', one or two chars.
std::string id_code(size_t i) {
  const unsigned base = 94;
  std::string s(1, (char)('!' + i % base));
  if (i >= base) s.insert(s.begin(), (char)('!' + (i / base - 1) % base));
  return s;
}

std::string binary(uint64_t v, unsigned width) {
  std::string s(width, '0');
  for (unsigned i = 0; i < width; i++)
    if ((v >> i) & 1) s[width - 1 - i] = '1';
  return s;
}

void emit_change(std::string &out, const VcdVar &v, const std::string &id,
                 uint64_t value) {
  if (v.width == 1) {
    out += (value & 1) ? "1" : "0";
    out += id;
  } else {
    out += "b" + binary(value, v.width) + " " + id;
  }
  out += "\n";
}

} // namespace

std::string write_vcd(const std::string &scope,
                      const std::vector<VcdVar> &vars) {
  size_t nframes = 0;
  for (const auto &v : vars) nframes = std::max(nframes, v.frames.size());

  std::string out;
  out += "$timescale 1ns $end\n";
  out += "$scope module " + scope + " $end\n";
  std::vector<std::string> ids;
  for (size_t i = 0; i < vars.size(); i++) {
    ids.push_back(id_code(i));
    out += "$var wire " + std::to_string(vars[i].width) + " " + ids[i] +
           " " + vars[i].name + " $end\n";
  }
  out += "$upscope $end\n";
  out += "$enddefinitions $end\n";
  for (size_t k = 0; k < nframes; k++) {
    out += "#" + std::to_string(k) + "\n";
    for (size_t i = 0; i < vars.size(); i++) {
      const auto &v = vars[i];
      if (k >= v.frames.size()) continue;
      if (k > 0 && k - 1 < v.frames.size() && v.frames[k] == v.frames[k - 1])
        continue;
      emit_change(out, v, ids[i], v.frames[k]);
    }
  }
  return out;
}

namespace {

struct Reader {
  std::istringstream in;
  unsigned line = 0;
  std::string cur;

  explicit Reader(const std::string &text) : in(text) {}

  bool next() {
    while (std::getline(in, cur)) {
      line++;
      if (!cur.empty() && cur.back() == '\r') cur.pop_back();
      if (!cur.empty()) return true;
    }
    return false;
  }

  [[noreturn]] void err(const std::string &msg) const {
    throw std::runtime_error("vcd line " + std::to_string(line) + ": " + msg);
  }

  std::vector<std::string> words() const {
    std::vector<std::string> out;
    std::istringstream ls(cur);
    std::string w;
    while (ls >> w) out.push_back(w);
    return out;
  }
};

} // namespace

VcdFile read_vcd(const std::string &text) {
  Reader r(text);
  VcdFile f;
  std::unordered_map<std::string, size_t> by_id;

  if (!r.next() || r.cur != "$timescale 1ns $end")
    r.err("expected '$timescale 1ns $end'");
  if (!r.next()) r.err("expected scope");
  {
    auto w = r.words();
    if (w.size() != 4 || w[0] != "$scope" || w[1] != "module" ||
        w[3] != "$end")
      r.err("expected '$scope module <name> $end'");
    f.scope = w[2];
  }
  while (true) {
    if (!r.next()) r.err("unterminated declarations");
    if (r.cur == "$upscope $end") break;
    auto w = r.words();
    if (w.size() != 6 || w[0] != "$var" || w[1] != "wire" || w[5] != "$end")
      r.err("expected '$var wire <width> <id> <name> $end'");
    unsigned width = 0;
    try {
      width = (unsigned)std::stoul(w[2]);
    } catch (...) {
      r.err("bad width '" + w[2] + "'");
    }
    if (width == 0 || width > 64) r.err("width out of range");
    if (by_id.count(w[3])) r.err("duplicate id '" + w[3] + "'");
    by_id[w[3]] = f.vars.size();
    f.vars.push_back({w[4], width, {}});
  }
  if (!r.next() || r.cur != "$enddefinitions $end")
    r.err("expected '$enddefinitions $end'");

  std::vector<uint64_t> current(f.vars.size(), 0);
  std::vector<bool> seen(f.vars.size(), false);
  long frame = -1;

  auto close_frame = [&]() {
    if (frame < 0) return;
    for (size_t i = 0; i < f.vars.size(); i++) {
      if (!seen[i]) throw std::runtime_error(
          "vcd: variable '" + f.vars[i].name + "' has no value at frame 0");
      f.vars[i].frames.push_back(current[i]);
    }
  };

  while (r.next()) {
    if (r.cur[0] == '#') {
      long k = -1;
      try {
        k = std::stol(r.cur.substr(1));
      } catch (...) {
        r.err("bad timestamp");
      }
      if (k != frame + 1) r.err("timestamps must advance by one frame");
      close_frame();
      frame = k;
      continue;
    }
    if (frame < 0) r.err("value change before first timestamp");
    if (r.cur[0] == 'b') {
      size_t sp = r.cur.find(' ');
      if (sp == std::string::npos) r.err("expected 'b<bits> <id>'");
      std::string bits = r.cur.substr(1, sp - 1);
      std::string id = r.cur.substr(sp + 1);
      auto it = by_id.find(id);
      if (it == by_id.end()) r.err("unknown id '" + id + "'");
      const VcdVar &v = f.vars[it->second];
      if (bits.empty() || bits.size() > v.width) r.err("bad value width");
      uint64_t val = 0;
      for (char c : bits) {
        if (c != '0' && c != '1') r.err("non-binary value");
        val = (val << 1) | (uint64_t)(c - '0');
      }
      current[it->second] = val;
      seen[it->second] = true;
      continue;
    }
    if (r.cur[0] == '0' || r.cur[0] == '1') {
      std::string id = r.cur.substr(1);
      auto it = by_id.find(id);
      if (it == by_id.end()) r.err("unknown id '" + id + "'");
      if (f.vars[it->second].width != 1)
        r.err("scalar change on vector '" + f.vars[it->second].name + "'");
      current[it->second] = (uint64_t)(r.cur[0] - '0');
      seen[it->second] = true;
      continue;
    }
    r.err("unrecognized line '" + r.cur + "'");
  }
  close_frame();
  f.nframes = frame < 0 ? 0 : (unsigned)(frame + 1);
  return f;
}

} // namespace eqc
