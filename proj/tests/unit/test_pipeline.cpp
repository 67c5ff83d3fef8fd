#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hb/errors.hpp"
#include "hb/pipeline.hpp"
#include "hb/report.hpp"

using namespace hb;
namespace fs = std::filesystem;

namespace {

const std::string k37a1Line = R"({"label":"37a1","a":[0,0,1,-1,0],"generator":[0,1,0,1]})";

Config fast_config() {
  Config c;
  c.precision_digits = 40;
  c.sieve_bound = 2000;
  return c;
}

const AnalysisReport& report37a1() {
  static const AnalysisReport r = analyze(parse_curve_record(k37a1Line), 7, 5, fast_config());
  return r;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("hb_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Ingest, EmptyInput) {
  std::istringstream in("");
  const auto r = parse_curves(in);
  EXPECT_TRUE(r.records.empty());
  EXPECT_TRUE(r.errors.empty());
}

TEST(Ingest, GoodAndBadLines) {
  std::istringstream in(k37a1Line + "\n\n" + R"({"label":"sing","a":[0,0,0,0,0]})" + "\n" +
                        R"({"label":"off","a":[0,0,1,-1,0],"generator":[1,1,1,1]})" + "\n" + "not json\n" +
                        k37a1Line + "\n");
  const auto r = parse_curves(in);
  ASSERT_EQ(r.records.size(), 1U);
  EXPECT_EQ(r.records[0].label, "37a1");
  EXPECT_EQ(*r.records[0].generator, RationalPoint::affine(0, 0));
  ASSERT_EQ(r.errors.size(), 4U);
  EXPECT_EQ(r.errors[0].rfind("line 3: ", 0), 0U);
  EXPECT_EQ(r.errors[1].rfind("line 4: ", 0), 0U);
  EXPECT_NE(r.errors[3].find("duplicate"), std::string::npos);
  EXPECT_THROW(static_cast<void>(find_record(r, "11a1")), ValidationError);
  EXPECT_THROW(static_cast<void>(ingest_curves("/nonexistent/curves.jsonl")), ValidationError);
}

TEST(Ingest, BundledTable) {
  const auto t = ingest_curves(std::string(HB_DATA_DIR) + "/curves.jsonl");
  EXPECT_TRUE(t.errors.empty());
  EXPECT_GE(t.records.size(), 20U);
  EXPECT_EQ(find_record(t, "141a1").a, (Coefficients{0, 1, 1, -12, 2}));
}

TEST(Ingest, PointSyntax) {
  EXPECT_EQ(parse_point("1/4,-5/8"), RationalPoint::affine(BigRational(1, 4), BigRational(-5, 8)));
  EXPECT_EQ(parse_point(" 0 , 0 "), RationalPoint::affine(0, 0));
  EXPECT_THROW(static_cast<void>(parse_point("3")), ValidationError);
  EXPECT_THROW(static_cast<void>(parse_point("a,b")), ValidationError);
}

TEST(Config, SetAndLoad) {
  Config c;
  c.set("precision_digits", "60");
  c.set("allow_unverified_hypothesis", "true");
  EXPECT_EQ(c.precision_digits, 60);
  EXPECT_TRUE(c.allow_unverified_hypothesis);
  EXPECT_THROW(c.set("precision_digits", "20"), ValidationError);
  EXPECT_THROW(c.set("precision_digits", "6x"), ValidationError);
  EXPECT_THROW(c.set("colour", "blue"), ValidationError);
  EXPECT_EQ(c.entries().count("workers"), 0U);

  const fs::path d = scratch_dir("config");
  std::ofstream(d / "hb.conf") << "# comment\nsieve_bound = 500\n\nseed=9\n";
  const Config l = load_config(d / "hb.conf");
  EXPECT_EQ(l.sieve_bound, 500U);
  EXPECT_EQ(l.seed, 9U);
  std::ofstream(d / "bad.conf") << "sieve_bound 500\n";
  EXPECT_THROW(static_cast<void>(load_config(d / "bad.conf")), ValidationError);
}

TEST(ExitCodes, ByErrorKind) {
  EXPECT_EQ(exit_code_for(ValidationError("x")), 2);
  EXPECT_EQ(exit_code_for(ComputationError("x")), 3);
  EXPECT_EQ(exit_code_for(HypothesisError("x")), 4);
  EXPECT_EQ(exit_code_for(std::runtime_error("x")), 1);
}

TEST(Analyze, RejectsBadInputs) {
  const auto rec = parse_curve_record(k37a1Line);
  EXPECT_THROW(static_cast<void>(analyze(rec, 8, 5, fast_config())), ValidationError);
  EXPECT_THROW(static_cast<void>(analyze(rec, 7, 37, fast_config())), ValidationError);
  EXPECT_THROW(static_cast<void>(analyze(rec, 7, 9, fast_config())), ValidationError);
  EXPECT_THROW(static_cast<void>(analyze(rec, 7, 7, fast_config())), ValidationError);
}

TEST(Analyze, HypothesisGate) {
  const auto rec = parse_curve_record(R"({"label":"11a1","a":[0,-1,1,-10,-20]})");
  try {
    static_cast<void>(analyze(rec, 7, 5, fast_config()));
    FAIL() << "expected HypothesisError";
  } catch (const HypothesisError& e) {
    EXPECT_EQ(exit_code_for(e), 4);
  }
}

TEST(Analyze, ThirtySevenA1) {
  const auto& r = report37a1();
  EXPECT_EQ(r.conductor, "37");
  EXPECT_EQ(r.beta, 17);
  EXPECT_EQ(r.hypothesis_star.status, "surjective");
  EXPECT_EQ(r.m0, 0);
  EXPECT_EQ(r.index.n, "2");
  EXPECT_EQ(r.generator.provenance, "record");
  ASSERT_EQ(r.local_data.size(), 1U);
  EXPECT_EQ(r.local_data[0].tamagawa, 1);
  EXPECT_EQ(r.bounds.exponent_improved, r.bounds.exponent_kolyvagin);
  EXPECT_EQ(r.bounds.exponent_kolyvagin, 2 * r.m0);
  ASSERT_TRUE(r.distribution);
  EXPECT_TRUE(r.distribution->passed);
  EXPECT_FALSE(r.caveats.empty());
}

TEST(Report, JsonRoundTrip) {
  const auto& r = report37a1();
  const std::string j = to_json(r);
  EXPECT_EQ(report_from_json(j), r);
  EXPECT_EQ(to_json(report_from_json(j)), j);
  EXPECT_THROW(static_cast<void>(report_from_json("{}")), ValidationError);
  EXPECT_THROW(static_cast<void>(report_from_json("[")), ValidationError);
}

TEST(Report, MarkdownHasBoundsTable) {
  const std::string md = to_markdown(report37a1());
  EXPECT_NE(md.find("## Bounds"), std::string::npos);
  EXPECT_NE(md.find("| improved, 2 m0 - 2 m_max | " + std::to_string(report37a1().bounds.exponent_improved) + " |"), std::string::npos);
  EXPECT_NE(md.find("37a1"), std::string::npos);
}

TEST(Report, KeyAndEmission) {
  const auto& r = report37a1();
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  const std::string key = report_key(r);
  EXPECT_EQ(key.size(), 16U);
  AnalysisReport other = r;
  other.p = 7;
  EXPECT_NE(report_key(other), key);

  const fs::path d = scratch_dir("emit");
  const fs::path j = emit_report(r, ReportFormat::json, d);
  const fs::path m = emit_report(r, ReportFormat::markdown, d);
  EXPECT_EQ(j, d / (key + ".json"));
  EXPECT_EQ(m, d / (key + ".md"));
  EXPECT_EQ(slurp(j), to_json(r));
  AnalysisTiming t;
  t.stages = {{"heegner_point", 1.5}, {"index", 0.25}};
  EXPECT_DOUBLE_EQ(t.total(), 1.75);
  EXPECT_EQ(emit_timing(r, t, d), d / (key + ".timing.json"));
}

TEST(Report, DeterministicAcrossRuns) {
  Config c = fast_config();
  const auto rec = parse_curve_record(k37a1Line);
  const std::string a = to_json(analyze(rec, 7, 5, c));
  c.workers = 2;
  EXPECT_EQ(to_json(analyze(rec, 7, 5, c)), a);
}
