#include <gtest/gtest.h>

#include "codeg/proof.hpp"
#include "codeg/recheck.hpp"

using namespace codeg;

namespace {

const Json& report() {
  static Json j = [] {
    Catalog c = load_catalog(CODEG_TEST_DATA);
    VerifyOptions o;
    o.jobs = 4;
    // round trip through text, as the CLI does
    return Json::parse(verify_all(c, o).json.dump(1));
  }();
  return j;
}

Json& case_of(Json& rep, const std::string& id) {
  for (auto& c : rep["cases"])
    if (c["id"] == id) return c;
  throw std::runtime_error("no case " + id);
}

}  // namespace

TEST(Recheck, CleanReportPasses) {
  RecheckResult r = recheck_report(report());
  for (const auto& p : r.problems) ADD_FAILURE() << p;
  EXPECT_TRUE(r.consistent);
  EXPECT_TRUE(r.closed);
  EXPECT_EQ(r.cases, report().at("cases").size());
  EXPECT_GT(r.points, 100U);
  EXPECT_GT(r.certificates, 100U);
}

TEST(Recheck, TamperedWitness) {
  Json j = report();
  case_of(j, "U33.case3.L3_4")["witness"] = "1008";  // lies in cod(U3(3))
  EXPECT_FALSE(recheck_report(j).consistent);
}

TEST(Recheck, TamperedGridWitness) {
  Json j = report();
  for (auto& p : case_of(j, "U42.BC")["points"])
    if (p["outcome"] == "witness") {
      p["witness"] = "2836";
      break;
    }
  EXPECT_FALSE(recheck_report(j).consistent);
}

TEST(Recheck, DroppedGridPoint) {
  Json j = report();
  auto& c = case_of(j, "U33.case1.validated");
  c["grid"].erase(c["grid"].size() - 1);
  c["points"].erase(c["points"].size() - 1);
  EXPECT_FALSE(recheck_report(j).consistent);
}

TEST(Recheck, TamperedStopPoint) {
  Json j = report();
  auto& s = case_of(j, "U33.case2")["reduction"]["scans"][0];
  s["stop"] = s["stop"].get<std::int64_t>() - 2;
  EXPECT_FALSE(recheck_report(j).consistent);
}

TEST(Recheck, TamperedCertificateValue) {
  Json j = report();
  auto& m = case_of(j, "U33.case2")["reduction"]["scans"][0]["monotonicity"];
  ASSERT_FALSE(m.empty());
  auto& pts = m[0]["checked_points"];
  if (!pts.empty()) {
    pts[0][1] = "-1";
  } else {
    m[0]["from"] = -1000;
  }
  EXPECT_FALSE(recheck_report(j).consistent);
}

TEST(Recheck, FalseClosedVerdictCaught) {
  Json j = report();
  for (auto& p : case_of(j, "U42.unitary")["points"])
    if (p["outcome"] == "match") {
      const Json v = p["values_in_target"][0];
      p["outcome"] = "witness";
      p["witness"] = v["value"];
      p["formula"] = v["formula"];
    }
  EXPECT_FALSE(recheck_report(j).consistent);
  // a witness outcome without its value is a malformed report
  j = report();
  for (auto& p : case_of(j, "U42.unitary")["points"])
    if (p["outcome"] == "match") p["outcome"] = "witness";
  EXPECT_THROW(recheck_report(j), Error);
}

TEST(Recheck, OpenCaseMakesReportOpen) {
  Json j = report();
  auto& c = case_of(j, "U42.G2");
  c["verdict"] = "open";
  c["open_reason"] = "test";
  j["verdict"] = "open";
  j["open_cases"] = Json::array({"U42.G2"});
  RecheckResult r = recheck_report(j);
  EXPECT_FALSE(r.closed);
}

TEST(Recheck, VersionAndShapeErrors) {
  Json j = report();
  j["format_version"] = 2;
  try {
    recheck_report(j);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Parse);
  }
  j = report();
  j.erase("format_version");
  EXPECT_THROW(recheck_report(j), Error);
  j = report();
  j.erase("targets");
  EXPECT_THROW(recheck_report(j), Error);
  EXPECT_THROW(recheck_report(Json::array()), Error);
}
