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

#include "eqc/harness.h"

#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "eqc/softfloat.h"

using namespace eqc;
using namespace eqc::harness;

namespace {

const char *kMin32 = R"(
f32 min32(f32 a, f32 b) {
  u32 ab = fp_bits(a);
  u32 bb = fp_bits(b);
  bool na = ((ab >> 23) & 0xFF) == 0xFF && (ab & 0x7FFFFF) != 0;
  bool nb = ((bb >> 23) & 0xFF) == 0xFF && (bb & 0x7FFFFF) != 0;
  bool sna = na && ((ab >> 22) & 1) == 0;
  bool snb = nb && ((bb >> 22) & 1) == 0;
  if (sna || snb || (na && nb)) { return f32_of_bits(0x7FC00000); }
  if (na) { return b; }
  if (nb) { return a; }
  bool za = (ab & 0x7FFFFFFF) == 0;
  bool zb = (bb & 0x7FFFFFFF) == 0;
  if (za && zb) { return f32_of_bits(((ab >> 31) | (bb >> 31)) << 31); }
  if (fp_lt(a, b)) { return a; }
  return b;
}
)";

// Both-NaN case leaks +0.0 instead of the canonical quiet NaN.
const char *kMin32Bug = R"(
f32 min32(f32 a, f32 b) {
  u32 ab = fp_bits(a);
  u32 bb = fp_bits(b);
  bool na = ((ab >> 23) & 0xFF) == 0xFF && (ab & 0x7FFFFF) != 0;
  bool nb = ((bb >> 23) & 0xFF) == 0xFF && (bb & 0x7FFFFF) != 0;
  bool sna = na && ((ab >> 22) & 1) == 0;
  bool snb = nb && ((bb >> 22) & 1) == 0;
  if (na && nb) { return f32_of_bits(0); }
  if (sna || snb) { return f32_of_bits(0x7FC00000); }
  if (na) { return b; }
  if (nb) { return a; }
  bool za = (ab & 0x7FFFFFFF) == 0;
  bool zb = (bb & 0x7FFFFFFF) == 0;
  if (za && zb) { return f32_of_bits(((ab >> 31) | (bb >> 31)) << 31); }
  if (fp_lt(a, b)) { return a; }
  return b;
}
)";

const char *kUpCounterRtl = R"(
module up_counter(out, enable, clk, reset);
  output [7:0] out;
  input enable, clk, reset;
  reg [7:0] out;
  always @(posedge clk)
    if (reset)
      out <= 8'b0;
    else if (enable)
      out <= out + 8'd1;
endmodule
)";

// Reset polarity is inverted.
const char *kUpCounterBugRtl = R"(
module up_counter(out, enable, clk, reset);
  output [7:0] out;
  input enable, clk, reset;
  reg [7:0] out;
  always @(posedge clk)
    if (!reset)
      out <= 8'b0;
    else if (enable)
      out <= out + 8'd1;
endmodule
)";

const char *kUpCounterModel = R"(
bool reset_f0; bool enable_f0;
bool reset_f1; bool enable_f1;
bool reset_f2; bool enable_f2;
bool reset_f3; bool enable_f3;
u8 out_f1; u8 out_f2; u8 out_f3;

void top() {
  assume(reset_f0);
  u8 c = 0;
  out_f1 = c;
  if (reset_f1) { c = 0; } else { if (enable_f1) { c = c + 1; } }
  out_f2 = c;
  if (reset_f2) { c = 0; } else { if (enable_f2) { c = c + 1; } }
  out_f3 = c;
}
)";

std::filesystem::path fixture_dir() {
  std::filesystem::path dir = std::filesystem::temp_directory_path() /
                              "eqc_harness_fixtures";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string put(const std::string &name, const std::string &text) {
  std::filesystem::path p = fixture_dir() / name;
  std::ofstream out(p, std::ios::binary);
  out << text;
  out.close();
  return p.string();
}

size_t col_index(const VerdictTable &t, const std::string &name) {
  for (size_t i = 0; i < t.columns.size(); i++)
    if (t.columns[i] == name) return i;
  REQUIRE(false);
  return 0;
}

} // namespace

TEST_CASE("miter spec parsing") {
  std::string text = "# adder check\n"
                     "miter add_check\n"
                     "input f32 a\n"
                     "input f32 b\n"
                     "ref builtin fp_add\n"
                     "impl minic dp_add.mc dp_add32\n"
                     "rmode all\n"
                     "partitions\n"
                     "engine path\n"
                     "mode partial\n"
                     "unwind 4\n";
  MiterSpec s = parse_miter_spec(text, "add.miter");
  CHECK(s.name == "add_check");
  CHECK(s.inputs.size() == 2);
  CHECK(s.inputs[0].first == "a");
  CHECK(s.has_float_input);
  CHECK(s.fmt == FloatFormat::binary32());
  CHECK(s.ref_is_builtin);
  CHECK(s.ref_op == "fp_add");
  CHECK(s.impl_fn == "dp_add32");
  CHECK(s.rmode == "all");
  CHECK(s.partitions.size() == 5);
  CHECK(s.engine == EngineSel::Path);
  CHECK(s.mode == ExplorationMode::PartialIncremental);
  CHECK(s.unwind == 4);

  auto bad = [&](const std::string &t2, const std::string &needle) {
    try {
      parse_miter_spec(t2, "bad.miter");
      FAIL_CHECK("no error for: " << t2);
    } catch (const HarnessError &e) {
      CHECK_MESSAGE(std::string(e.what()).find(needle) != std::string::npos,
                    "got: " << e.what() << " want: " << std::string(needle));
    }
  };
  bad("miter m\ninput f32 a\nimpl minic x.mc f\n", "missing ref");
  bad("miter m\ninput f32 a\nref builtin fp_min\nimpl minic x.mc f\n"
      "rmode RNE\n",
      "no rmode");
  bad("miter m\ninput f32 a\nref builtin fp_add\nimpl minic x.mc f\n",
      "needs an rmode");
  bad("miter m\ninput f32 a\nref builtin fp_nope\nimpl minic x.mc f\n",
      "unknown builtin");
  bad("miter m\ninput f32 a\nref builtin fp_min\nimpl minic x.mc f\n"
      "partitions NAN\n",
      "unknown partition");
  bad("miter m\ninput u8 a\nref minic r.mc f\nimpl minic x.mc g\n"
      "partitions\n",
      "need a float input");
  bad("miter m\ninput f32 a\nref minic r.mc f\nimpl minic x.mc g\n"
      "script\nset a 1\nend\n",
      "software miters");
  bad("miter m\nref minic r.mc f\nimpl rtl x.rtl top\nengine path\n",
      "monolithic");
  bad("miter m\ninput f32 a\nfrobnicate\n", "unknown directive");
}

TEST_CASE("sw miter wrapper synthesis and trivial equivalence") {
  MiterSpec s;
  s.name = "same";
  s.file = "same.miter";
  s.inputs = {{"x", Type::ubits(8)}, {"y", Type::ubits(8)}};
  s.ref_fn = "f";
  s.ref_source = "u8 f(u8 x, u8 y) { return x + y; }\n";
  s.impl_fn = "g";
  s.impl_source = "u8 g(u8 x, u8 y) { return y + x; }\n";

  ExprArena A;
  SwMiter m = build_sw_miter(s, A);
  CHECK(m.operands.empty());
  CHECK(m.source.find("assert(miter_same, \"outputs_match\")") !=
        std::string::npos);

  RunOptions ro;
  VerdictTable t = run_partitions(s, A, ro);
  REQUIRE(t.columns.size() == 1);
  CHECK(t.columns[0] == "Total");
  CHECK(t.cells[0].status == CheckStatus::Holds);
  CHECK(t.cells[0].paths == 1);

  ro.engine = EngineSel::Monolithic;
  ExprArena A2;
  VerdictTable t2 = run_partitions(s, A2, ro);
  CHECK(t2.cells[0].status == CheckStatus::Holds);
}

TEST_CASE("signature mismatch diagnostics") {
  MiterSpec s;
  s.name = "m";
  s.file = "m.miter";
  s.inputs = {{"x", Type::ubits(8)}};
  s.ref_fn = "f";
  s.ref_source = "u8 f(u8 x) { return x; }\n";
  s.impl_fn = "g";
  s.impl_source = "u8 g(u16 x) { return 0; }\n";
  ExprArena A;
  CHECK_THROWS_WITH_AS(build_sw_miter(s, A),
                       doctest::Contains("input-signature mismatch"),
                       HarnessError);

  s.impl_source = "u16 g(u8 x) { return 0; }\n";
  CHECK_THROWS_WITH_AS(build_sw_miter(s, A), doctest::Contains("returns"),
                       HarnessError);

  s.impl_source = "u8 h(u8 x) { return x; }\n";
  CHECK_THROWS_WITH_AS(build_sw_miter(s, A), doctest::Contains("no function"),
                       HarnessError);
}

TEST_CASE("builtin min against matching mini-C model holds everywhere") {
  MiterSpec s;
  s.name = "min_ok";
  s.file = "min_ok.miter";
  s.inputs = {{"a", Type::float_(FloatFormat::binary32())},
              {"b", Type::float_(FloatFormat::binary32())}};
  s.ref_is_builtin = true;
  s.ref_op = "fp_min";
  s.fmt = FloatFormat::binary32();
  s.has_float_input = true;
  s.impl_fn = "min32";
  s.impl_source = kMin32;
  s.partitions = all_partitions();

  ExprArena A;
  RunOptions ro;
  ro.partition = "all";
  VerdictTable t = run_partitions(s, A, ro);
  REQUIRE(t.columns.size() == 6);
  for (size_t i = 0; i < t.columns.size(); i++) {
    CAPTURE(t.columns[i]);
    CHECK(t.cells[i].status == CheckStatus::Holds);
    CHECK(t.cells[i].paths >= 1);
  }
}

TEST_CASE("buggy min violates exactly the NaN partition") {
  MiterSpec s;
  s.name = "min_bug";
  s.file = "min_bug.miter";
  s.inputs = {{"a", Type::float_(FloatFormat::binary32())},
              {"b", Type::float_(FloatFormat::binary32())}};
  s.ref_is_builtin = true;
  s.ref_op = "fp_min";
  s.fmt = FloatFormat::binary32();
  s.has_float_input = true;
  s.impl_fn = "min32";
  s.impl_source = kMin32Bug;

  for (EngineSel eng : {EngineSel::Path, EngineSel::Monolithic}) {
    ExprArena A;
    RunOptions ro;
    ro.engine = eng;
    ro.partition = "all";
    VerdictTable t = run_partitions(s, A, ro);
    for (size_t i = 0; i < t.columns.size(); i++) {
      CAPTURE(t.columns[i]);
      if (t.columns[i] == "NaN" || t.columns[i] == "Total") {
        CHECK(t.cells[i].status == CheckStatus::Violated);
      } else {
        CHECK(t.cells[i].status == CheckStatus::Holds);
      }
    }
    size_t nan = col_index(t, "NaN");
    REQUIRE(t.cells[nan].cex);
    const Counterexample &cex = *t.cells[nan].cex;
    CHECK(cex.label == "outputs_match");
    uint64_t ab = cex.inputs.at("a");
    uint64_t bb = cex.inputs.at("b");
    CHECK(fp::classify(FloatFormat::binary32(), ab) == FpClass::QuietNan);
    CHECK(fp::classify(FloatFormat::binary32(), bb) == FpClass::QuietNan);
  }
}

TEST_CASE("partition assumptions") {
  ExprArena A;
  Expr total = partition_assumption({"a"}, FloatFormat::binary32(), "Total", A);
  CHECK(total.is_true());
  CHECK_THROWS_AS(
      partition_assumption({"a"}, FloatFormat::binary32(), "WEIRD", A),
      HarnessError);
}

TEST_CASE("up-counter RTL miter holds") {
  std::string model = put("ucm.mc", kUpCounterModel);
  std::string rtl = put("uc.rtl", kUpCounterRtl);
  std::string spec_text = "miter uc\n"
                          "ref minic ucm.mc top\n"
                          "impl rtl uc.rtl up_counter\n"
                          "bound 3\n";
  std::string spec_path = put("uc.miter", spec_text);

  MiterSpec s = load_miter_spec(spec_path);
  CHECK(s.bound == 3);
  CHECK(s.impl_module == "up_counter");

  ExprArena A;
  HwMiter m = build_hw_miter(s, A);
  CHECK(m.ssa.asserts.size() == 3);
  CHECK(m.script.size() > 8);

  HwCheckResult r = check_hw_miter(m, A);
  REQUIRE(r.asserts.size() == 3);
  for (const AssertResult &ar : r.asserts) {
    CAPTURE(ar.label);
    CHECK(ar.status == CheckStatus::Holds);
  }
  CHECK(!r.trace);
  CHECK(r.stats.solver_instances == 1);
  CHECK(r.stats.sat_queries == 3);

  VerdictTable t = run_partitions(s, A);
  REQUIRE(t.columns.size() == 1);
  CHECK(t.cells[0].status == CheckStatus::Holds);
}

TEST_CASE("mutated reset is caught with a consistent trace") {
  std::string model = put("ucm.mc", kUpCounterModel);
  std::string rtl = put("uc_bug.rtl", kUpCounterBugRtl);
  std::string spec_text = "miter uc_bug\n"
                          "ref minic ucm.mc top\n"
                          "impl rtl uc_bug.rtl up_counter\n"
                          "bound 3\n";
  std::string spec_path = put("uc_bug.miter", spec_text);

  MiterSpec s = load_miter_spec(spec_path);
  ExprArena A;
  VerdictTable t = run_partitions(s, A);
  REQUIRE(t.columns.size() == 1);
  CHECK(t.cells[0].status == CheckStatus::Violated);
  REQUIRE(t.cells[0].trace);

  const HwTrace &tr = *t.cells[0].trace;
  CHECK(tr.bound == 3);
  std::string vcd = write_vcd("uc_bug", tr.signals);
  VcdFile parsed = read_vcd(vcd);
  CHECK(parsed.scope == "uc_bug");
  CHECK(parsed.nframes == 4);
  bool found_out = false;
  for (const VcdVar &v : parsed.vars)
    if (v.name == "out") {
      found_out = true;
      CHECK(v.width == 8);
      CHECK(v.frames.size() == 4);
    }
  CHECK(found_out);
}

TEST_CASE("hardware script diagnostics") {
  std::string model = put("ucm.mc", kUpCounterModel);
  std::string rtl = put("uc.rtl", kUpCounterRtl);

  auto bad = [&](const std::string &spec_text, const std::string &needle) {
    std::string path = put("neg.miter", spec_text);
    MiterSpec s = load_miter_spec(path);
    ExprArena A;
    try {
      build_hw_miter(s, A);
      FAIL_CHECK("no error, wanted: " << std::string(needle));
    } catch (const HarnessError &e) {
      CHECK_MESSAGE(std::string(e.what()).find(needle) != std::string::npos,
                    "got: " << e.what() << " want: " << std::string(needle));
    }
  };

  std::string head = "miter neg\n"
                     "ref minic ucm.mc top\n"
                     "impl rtl uc.rtl up_counter\n"
                     "bound 1\n";
  bad(head + "script\n"
             "set reset 1\nset enable 0\nadvance\n"
             "set reset 0\nset enable 1\nadvance\n"
             "set reset 0\nset enable 1\n"
             "probe out out_f1 p\nend\n",
      "past bound");
  bad(head + "script\n"
             "set reset 1\nadvance\n"
             "set reset 0\nset enable 1\n"
             "probe out out_f1 p\nend\n",
      "unbound at frame 0");
  bad(head + "script\n"
             "set reset 1\nset enable 0\nadvance\n"
             "set reset 0\nset enable 1\n"
             "probe count out_f1 p\nend\n",
      "unknown RTL signal");
  bad(head + "script\n"
             "set reset 1\nset enable 0\nadvance\n"
             "set reset 0\nset enable 1\n"
             "probe out missing_g p\nend\n",
      "no global");
  bad(head + "script\n"
             "set reset 1\nset enable 0\nset reset 0\nadvance\n"
             "set reset 0\nset enable 1\n"
             "probe out out_f1 p\nend\n",
      "set twice");
  bad(head + "script\n"
             "set reset 1\nset enable 0\nadvance\n"
             "set reset 0\nset enable 1\nend\n",
      "probes nothing");
  bad(head + "script\n"
             "set reset 1\nset enable 0\nset out 3\nadvance\n"
             "set reset 0\nset enable 1\n"
             "probe out out_f1 p\nend\n",
      "not an input port");

  std::string wide = put("wide.mc", "bool reset_f0; bool enable_f0;\n"
                                    "u16 out_f0;\n"
                                    "void top() { out_f0 = 0; }\n");
  bad("miter neg\nref minic wide.mc top\nimpl rtl uc.rtl up_counter\n"
      "bound 0\n",
      "width mismatch");
}

TEST_CASE("machine rows and table rendering") {
  MiterSpec s;
  s.name = "rows";
  s.file = "rows.miter";
  s.inputs = {{"x", Type::ubits(4)}};
  s.ref_fn = "f";
  s.ref_source = "u8 f(u4 x) { return x; }\n";
  s.impl_fn = "g";
  s.impl_source = "u8 g(u4 x) { return x + 0; }\n";

  auto strip_time = [](std::string rows) {
    std::string out;
    std::istringstream in(rows);
    std::string line;
    while (std::getline(in, line)) {
      size_t last = line.find_last_of(',');
      out += line.substr(0, last) + "\n";
    }
    return out;
  };

  ExprArena A1, A2;
  std::string r1 = machine_rows(run_partitions(s, A1));
  std::string r2 = machine_rows(run_partitions(s, A2));
  CHECK(strip_time(r1) == strip_time(r2));
  CHECK(strip_time(r1) == "rows,Total,HOLDS,1\n");

  ExprArena A3;
  VerdictTable t = run_partitions(s, A3);
  std::string text = render_table(t);
  CHECK(text.find("miter rows") != std::string::npos);
  CHECK(text.find("Total") != std::string::npos);
  CHECK(text.find("HOLDS") != std::string::npos);
}
