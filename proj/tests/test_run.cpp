#include <bimops/run.hpp>

#include <gtest/gtest.h>

#include <filesystem>

#include "test_util.hpp"

using namespace bimops;
using bimops::testing::q;

namespace {

std::string field_of(const Json& j) {
    try {
        parse_config(j);
    } catch (const ConfigInvalid& e) {
        return e.field();
    }
    return "<accepted>";
}

RunConfig square(int n, std::vector<std::string> checks = all_checks()) {
    RunConfig c;
    c.max_degree = n;
    c.checks = std::move(checks);
    return c;
}

RunConfig indefinite() {
    return parse_config(Json::parse(R"({
      "weight": {"family": "custom",
                 "moments": [[0,0,"1"],[1,0,"0"],[0,1,"0"],[2,0,"-1"],[1,1,"0"],[0,2,"1"]]},
      "max_degree": 1, "checks": ["orthogonality"]})"));
}

void expect_all_passed(const RunReport& r) {
    for (const auto& c : r.checks)
        for (const auto& rec : c.records) EXPECT_TRUE(rec.passed) << c.name << " " << rec.identity << ": " << rec.detail;
}

} // namespace

TEST(Config, ParsesAllFields) {
    const auto c = parse_config(Json::parse(R"({
      "weight": {"family": "simplex", "a": "-1/2", "b": "1/3", "c": 2},
      "max_degree": 3, "checks": ["backlund", "orthogonality"],
      "output": {"format": "csv", "path": "out.csv"}})"));
    EXPECT_EQ(c.weight.family, WeightFamily::simplex);
    EXPECT_EQ(c.weight.a, q(-1, 2));
    EXPECT_EQ(c.weight.b, q(1, 3));
    EXPECT_EQ(c.weight.c, q(2));
    EXPECT_EQ(c.max_degree, 3);
    EXPECT_EQ(c.checks, (std::vector<std::string>{"backlund", "orthogonality"}));
    EXPECT_EQ(c.format, "csv");
    EXPECT_EQ(c.path, "out.csv");
    EXPECT_EQ(parse_config(Json::parse(R"({"weight":{"family":"ball"},"max_degree":1,"checks":"all"})")).checks,
              all_checks());
}

TEST(Config, ErrorsNameTheField) {
    EXPECT_EQ(field_of(Json::parse(R"({"weight":{"family":"ball","mu":"-2"},"max_degree":2,"checks":"all"})")),
              "/weight/mu");
    EXPECT_EQ(field_of(Json::parse(R"({"weight":{"family":"ball","mu":"-1"},"max_degree":2,"checks":"all"})")),
              "/weight/mu");
    EXPECT_EQ(field_of(Json::parse(R"({"weight":{"family":"ball","mu":"x/2"},"max_degree":2,"checks":"all"})")),
              "/weight/mu");
    EXPECT_EQ(field_of(Json::parse(R"({"weight":{"family":"disk"},"max_degree":2,"checks":"all"})")),
              "/weight/family");
    EXPECT_EQ(field_of(Json::parse(R"({"weight":{"family":"simplex","c":"-3/2"},"max_degree":2,"checks":"all"})")),
              "/weight/c");
    EXPECT_EQ(field_of(Json::parse(R"({"weight":{"family":"square-legendre"},"max_degree":0,"checks":"all"})")),
              "/max_degree");
    EXPECT_EQ(field_of(Json::parse(R"({"weight":{"family":"square-legendre"},"max_degree":2.5,"checks":"all"})")),
              "/max_degree");
    EXPECT_EQ(field_of(Json::parse(R"({"weight":{"family":"square-legendre"},"max_degree":2,"checks":[]})")),
              "/checks");
    EXPECT_EQ(field_of(Json::parse(
                  R"({"weight":{"family":"square-legendre"},"max_degree":2,"checks":["backlund","bogus"]})")),
              "/checks/1");
    EXPECT_EQ(field_of(Json::parse(
                  R"({"weight":{"family":"square-legendre"},"max_degree":2,"checks":"all","output":{"format":"xml"}})")),
              "/output/format");
    EXPECT_EQ(field_of(Json::parse(R"({"weight":{"family":"custom","moments":[[0,0,"0"]]},"max_degree":1,"checks":"all"})")),
              "/weight/moments");
    EXPECT_EQ(field_of(Json::parse(R"({"weight":{"family":"custom","moments":[[0,0,"1"],[1,"a","0"]]},"max_degree":1,"checks":"all"})")),
              "/weight/moments/1/1");
    EXPECT_EQ(field_of(Json::parse(R"({"weight":{"family":"custom"},"max_degree":1,"checks":"all"})")),
              "/weight/moments");
    EXPECT_EQ(field_of(Json::parse(R"([1,2])")), "");
}

TEST(Config, LoadReportsMissingFile) {
    EXPECT_THROW(load_config("/nonexistent/config.json"), IoFailure);
}

TEST(Run, SquareAllChecksPass) {
    const auto r = run(square(4));
    ASSERT_EQ(r.checks.size(), all_checks().size());
    for (std::size_t i = 0; i < r.checks.size(); ++i) EXPECT_EQ(r.checks[i].name, all_checks()[i]);
    expect_all_passed(r);
    EXPECT_TRUE(r.passed());
}

TEST(Run, ChecksRunInCanonicalOrderOnce) {
    const auto r = run(square(2, {"xu_case_study", "orthogonality", "xu_case_study"}));
    ASSERT_EQ(r.checks.size(), 2u);
    EXPECT_EQ(r.checks[0].name, "orthogonality");
    EXPECT_EQ(r.checks[1].name, "xu_case_study");
}

TEST(Run, BallAndOddDegree) {
    RunConfig c = square(5);
    c.weight.family = WeightFamily::ball;
    c.weight.mu = q(1, 2);
    const auto r = run(c);
    expect_all_passed(r);
    EXPECT_FALSE(r.correspondences.empty());
}

TEST(Run, IndefiniteCustomTableFailsAtDegreeOne) {
    const auto r = run(indefinite());
    EXPECT_FALSE(r.passed());
    ASSERT_EQ(r.checks.size(), 1u);
    const auto& rec = r.checks[0].records.at(0);
    EXPECT_FALSE(rec.passed);
    EXPECT_EQ(rec.indices, (std::vector<std::pair<std::string, int>>{{"n", 1}}));
    EXPECT_NE(rec.detail.find("degree 1"), std::string::npos) << rec.detail;
    ASSERT_TRUE(rec.witness.has_value());
    EXPECT_EQ(*rec.witness, (RatMatrix{{-1, 0}, {0, 1}}));
}

TEST(Run, NonSymmetricWeightFailsSymmetricChecksGracefully) {
    RunConfig c = square(2, {"orthogonality", "decomposition", "backlund"});
    c.weight.family = WeightFamily::simplex;
    const auto r = run(c);
    ASSERT_EQ(r.checks.size(), 3u);
    EXPECT_TRUE(r.checks[0].passed());
    for (int i = 1; i <= 2; ++i) {
        EXPECT_FALSE(r.checks[i].passed());
        EXPECT_NE(r.checks[i].records[0].detail.find("not xy-symmetric"), std::string::npos);
    }
}

TEST(Run, MissingMomentsBecomeFailedRecords) {
    RunConfig c = square(3, {"orthogonality"});
    c.weight.family = WeightFamily::custom;
    c.weight.moments = {{{0, 0}, 1}, {{2, 0}, q(1, 3)}};
    const auto r = run(c);
    EXPECT_FALSE(r.passed());
}

TEST(Compute, DumpsFamilyAndCoefficients) {
    const auto r = compute(square(4));
    EXPECT_TRUE(r.passed());
    ASSERT_EQ(r.families.size(), 5u); // the family plus four small families
    EXPECT_EQ(r.families[0].slices.size(), 5u);
    EXPECT_EQ(r.families[0].slices[1], (PolyVector{Polynomial::x(), Polynomial::y()}));
    bool gamma11 = false;
    for (const auto& m : r.matrices)
        if (m.name == "Gamma" && m.indices == std::vector<std::pair<std::string, int>>{{"n", 1}, {"k", 1}}) {
            gamma11 = true;
            EXPECT_EQ(m.value, (RatMatrix{{q(1, 3)}, {0}}));
        }
    EXPECT_TRUE(gamma11);
    EXPECT_FALSE(compute(indefinite()).passed());
}

TEST(Output, JsonRoundTrip) {
    for (const auto& r : {run(square(4)), compute(square(3)), run(indefinite()), case_study(square(2))}) {
        const Json j = to_json(r);
        const RunReport back = report_from_json(Json::parse(j.dump()));
        EXPECT_EQ(back, r) << r.verb;
        EXPECT_EQ(j["status"], r.passed() ? "pass" : "fail");
    }
}

TEST(Output, JsonUsesExactStrings) {
    const Json j = to_json(compute(square(2)));
    EXPECT_EQ(j["families"][0]["slices"][2][0], Json::parse(R"([[0,0,"-1/3"],[2,0,"1"]])"));
    EXPECT_EQ(j["weight"]["family"], "square-legendre");
    EXPECT_TRUE(j.contains("timing"));
}

TEST(Output, CsvHasOneRowPerIdentity) {
    const auto r = run(square(2));
    const std::string csv = to_csv(r);
    std::size_t records = 0;
    for (const auto& c : r.checks) records += c.records.size();
    EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), records + 1);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "check,identity,indices,status,detail");
    EXPECT_NE(csv.find("orthogonality,"), std::string::npos);
}

TEST(Output, CsvQuotesFields) {
    RunReport r;
    r.checks.push_back({"c", {{"id", {{"n", 1}, {"k", 2}}, false, "a, \"b\"", std::nullopt}}});
    EXPECT_EQ(to_csv(r), "check,identity,indices,status,detail\nc,id,n=1;k=2,fail,\"a, \"\"b\"\"\"\n");
}

TEST(Output, LatexCaseStudyTable) {
    RunConfig c = square(2);
    c.weight.family = WeightFamily::ball;
    const std::string tex = to_latex(case_study(c));
    EXPECT_NE(tex.find("S_{2,0}"), std::string::npos);
    EXPECT_NE(tex.find("u - \\frac{1}{4}"), std::string::npos) << tex;
    EXPECT_NE(tex.find("\\Gamma_{1,1}"), std::string::npos);
    EXPECT_NE(tex.find("xu\\_case\\_study"), std::string::npos);
}

TEST(Output, DeterministicApartFromTiming) {
    auto strip = [](RunReport r) {
        r.seconds = 0;
        Json j = to_json(r);
        return j.dump();
    };
    EXPECT_EQ(strip(run(square(3))), strip(run(square(3))));
}

TEST(Output, EmitWritesAndReportsIoErrors) {
    const auto r = run(square(1, {"orthogonality"}));
    const auto path = std::filesystem::temp_directory_path() / "bimops_emit_test.csv";
    emit(r, "csv", path.string());
    EXPECT_TRUE(std::filesystem::exists(path));
    std::filesystem::remove(path);
    EXPECT_THROW(emit(r, "csv", "/nonexistent/dir/out.csv"), IoFailure);
}
