#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <string>

#include "invkit/errors.hpp"
#include "invkit/json_io.hpp"
#include "invkit/oracle.hpp"

using namespace invkit;

namespace {

const char* kDiamondDoc = R"({
  "system": {"A": [[-1.0, 0.0], [0.0, -1.0]], "time": "continuous"},
  "set": {"type": "h_polyhedron",
          "G": [[1, 1], [-1, 1], [1, -1], [-1, -1]],
          "b": [1, 1, 1, 1]}
})";

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("/tmp/invkit_test_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("a full problem document parses into its parts") {
  const Problem p = parse_problem_text(kDiamondDoc);
  CHECK_FALSE(p.discrete);
  CHECK(p.A.rows() == 2);
  CHECK(p.A(0, 0) == -1.0);
  CHECK(p.set.kind() == SetKind::HPolyhedron);
  CHECK(p.set.dim() == 2);
  CHECK(p.set.b() == Vector{1, 1, 1, 1});
  CHECK(p.seed == 0);
  CHECK_FALSE(p.x0.has_value());
}

TEST_CASE("tolerances, seed, and x0 are honored when present") {
  const Problem p = parse_problem_text(R"({
    "system": {"A": [[0.5]], "time": "discrete"},
    "set": {"type": "ellipsoid", "Q": [[1.0]]},
    "tolerances": {"psd_tol": 1e-6, "lp_tol": 1e-7},
    "seed": 42,
    "x0": [0.25]
  })");
  CHECK(p.tol.psd_tol == 1e-6);
  CHECK(p.tol.lp_tol == 1e-7);
  CHECK(p.seed == 42);
  REQUIRE(p.x0.has_value());
  CHECK((*p.x0)[0] == 0.25);
}

TEST_CASE("every set type round-trips through the parser") {
  CHECK(parse_problem_text(R"({"system": {"A": [[1,0],[0,1]], "time": "discrete"},
    "set": {"type": "h_cone", "G": [[-1,0],[0,-1]]}})").set.kind() == SetKind::HCone);
  CHECK(parse_problem_text(R"({"system": {"A": [[1,0],[0,1]], "time": "discrete"},
    "set": {"type": "v_polyhedron", "vertices": [[1,1],[1,-1],[-1,1],[-1,-1]]}})")
            .set.kind() == SetKind::VPolyhedron);
  CHECK(parse_problem_text(R"({"system": {"A": [[1,0],[0,1]], "time": "discrete"},
    "set": {"type": "v_cone", "rays": [[1,0],[0,1]]}})").set.kind() == SetKind::VCone);
  CHECK(parse_problem_text(R"({"system": {"A": [[1,0],[0,1]], "time": "discrete"},
    "set": {"type": "quadratic_set", "Q": [[1,0],[0,-1]]}})").set.kind() ==
        SetKind::QuadraticSet);
  CHECK(parse_problem_text(R"({"system": {"A": [[1,0,0],[0,1,0],[0,0,1]], "time": "discrete"},
    "set": {"type": "lorenz_cone", "Q": [[1,0,0],[0,1,0],[0,0,-1]]}})").set.kind() ==
        SetKind::LorenzCone);
  CHECK(parse_problem_text(R"({"system": {"A": [[1,0,0],[0,1,0],[0,0,1]], "time": "discrete"},
    "set": {"type": "double_cone", "Q": [[1,0,0],[0,1,0],[0,0,-1]]}})").set.kind() ==
        SetKind::DoubleCone);
}

TEST_CASE("schema violations are rejected with SchemaError") {
  // Unknown top-level key.
  CHECK_THROWS_AS(parse_problem_text(R"({"system": {"A": [[1]], "time": "discrete"},
    "set": {"type": "ellipsoid", "Q": [[1]]}, "bogus": 1})"), SchemaError);
  // Unknown set key.
  CHECK_THROWS_AS(parse_problem_text(R"({"system": {"A": [[1]], "time": "discrete"},
    "set": {"type": "ellipsoid", "Q": [[1]], "extra": 2}})"), SchemaError);
  // Unknown set type.
  CHECK_THROWS_AS(parse_problem_text(R"({"system": {"A": [[1]], "time": "discrete"},
    "set": {"type": "banana", "Q": [[1]]}})"), SchemaError);
  // Unknown time regime.
  CHECK_THROWS_AS(parse_problem_text(R"({"system": {"A": [[1]], "time": "sometimes"},
    "set": {"type": "ellipsoid", "Q": [[1]]}})"), SchemaError);
  // Ragged matrix.
  CHECK_THROWS_AS(parse_problem_text(R"({"system": {"A": [[1, 0], [0]], "time": "discrete"},
    "set": {"type": "ellipsoid", "Q": [[1, 0], [0, 1]]}})"), SchemaError);
  // Unknown tolerance key.
  CHECK_THROWS_AS(parse_problem_text(R"({"system": {"A": [[1]], "time": "discrete"},
    "set": {"type": "ellipsoid", "Q": [[1]]}, "tolerances": {"nope": 1e-6}})"), SchemaError);
  // Missing required field.
  CHECK_THROWS_AS(parse_problem_text(R"({"set": {"type": "ellipsoid", "Q": [[1]]}})"),
                  SchemaError);
  // Dimension mismatch between A and the set.
  CHECK_THROWS_AS(parse_problem_text(R"({"system": {"A": [[1,0],[0,1]], "time": "discrete"},
    "set": {"type": "ellipsoid", "Q": [[1,0,0],[0,1,0],[0,0,1]]}})"), SchemaError);
  // x0 of the wrong length.
  CHECK_THROWS_AS(parse_problem_text(R"({"system": {"A": [[1]], "time": "discrete"},
    "set": {"type": "ellipsoid", "Q": [[1]]}, "x0": [1, 2]})"), SchemaError);
}

TEST_CASE("content problems are rejected with ValidationError") {
  // Ellipsoid Q with a negative eigenvalue.
  CHECK_THROWS_AS(parse_problem_text(R"({"system": {"A": [[1,0],[0,1]], "time": "discrete"},
    "set": {"type": "ellipsoid", "Q": [[1,0],[0,-1]]}})"), ValidationError);
  // Lorenz cone with the wrong inertia.
  CHECK_THROWS_AS(parse_problem_text(R"({"system": {"A": [[1,0],[0,1]], "time": "discrete"},
    "set": {"type": "lorenz_cone", "Q": [[1,0],[0,1]]}})"), ValidationError);
}

TEST_CASE("negative tolerances are a schema violation") {
  CHECK_THROWS_AS(parse_problem_text(R"({"system": {"A": [[1]], "time": "discrete"},
    "set": {"type": "ellipsoid", "Q": [[1]]}, "tolerances": {"psd_tol": -1e-8}})"),
                  SchemaError);
}

TEST_CASE("malformed JSON raises ParseError") {
  CHECK_THROWS_AS(parse_problem_text("{"), ParseError);
  CHECK_THROWS_AS(parse_problem_text(""), ParseError);
  CHECK_THROWS_AS(read_text_file("/nonexistent/invkit/file.json"), ParseError);
}

TEST_CASE("reports round-trip through files and re-verify") {
  const Problem p = parse_problem_text(kDiamondDoc);
  const CheckReport r = run_check(p);
  REQUIRE(r.verdict == Verdict::Invariant);

  TempFile prob("diamond_problem.json");
  TempFile rep("diamond_report.json");
  write_text_file(prob.path, kDiamondDoc);
  write_text_file(rep.path, report_to_json_text(p, r, "check"));

  const ReportVerification v = verify_report_files(prob.path, rep.path);
  CHECK_MESSAGE(v.ok, (v.violations.empty() ? "" : v.violations.front()));
}

TEST_CASE("tampered certificates in a written report fail re-verification") {
  const Problem p = parse_problem_text(kDiamondDoc);
  const CheckReport r = run_check(p);

  std::string text = report_to_json_text(p, r, "check");
  // Flip the verdict's supporting scalar data by corrupting the matrix rows.
  const std::string needle = "\"matrix\"";
  REQUIRE(text.find(needle) != std::string::npos);
  const std::size_t pos = text.find("-1.0", text.find(needle));
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 4, "99.0");

  TempFile prob("tampered_problem.json");
  TempFile rep("tampered_report.json");
  write_text_file(prob.path, kDiamondDoc);
  write_text_file(rep.path, text);

  const ReportVerification v = verify_report_files(prob.path, rep.path);
  CHECK_FALSE(v.ok);
  CHECK_FALSE(v.violations.empty());
}

TEST_CASE("refutation reports carry a witness that replays from the file") {
  const char* doc = R"({
    "system": {"A": [[1.5, 0.0], [0.0, 0.2]], "time": "discrete"},
    "set": {"type": "ellipsoid", "Q": [[1, 0], [0, 1]]}
  })";
  const Problem p = parse_problem_text(doc);
  const CheckReport r = run_check(p);
  REQUIRE(r.verdict == Verdict::NotInvariant);

  TempFile prob("refuted_problem.json");
  TempFile rep("refuted_report.json");
  write_text_file(prob.path, doc);
  write_text_file(rep.path, report_to_json_text(p, r, "check"));
  const ReportVerification v = verify_report_files(prob.path, rep.path);
  CHECK_MESSAGE(v.ok, (v.violations.empty() ? "" : v.violations.front()));
}

TEST_CASE("report text records tool identity, verdict, and tolerances") {
  const Problem p = parse_problem_text(kDiamondDoc);
  const CheckReport r = run_check(p);
  const std::string text = report_to_json_text(p, r, "check");
  CHECK(text.find("\"invkit\"") != std::string::npos);
  CHECK(text.find("\"Invariant\"") != std::string::npos);
  CHECK(text.find("\"psd_tol\"") != std::string::npos);
  CHECK(text.find("\"h_polyhedron\"") != std::string::npos);
  CHECK(text.find("\"elapsed_seconds\"") != std::string::npos);
}

TEST_CASE("trajectory CSV has the labeled header and one row per state") {
  Trajectory tr;
  tr.states = {{1.0, 2.0}, {3.0, 4.0}};
  tr.times = {0.0, 0.5};
  const std::string csv = trajectory_to_csv(tr);
  CHECK(csv.rfind("t,x1,x2\n", 0) == 0);
  CHECK(csv.find("0.5,3,4") != std::string::npos);
  // Header plus two data rows.
  std::size_t lines = 0;
  for (char c : csv)
    if (c == '\n') ++lines;
  CHECK(lines == 3);
}

TEST_CASE("fixture files on disk parse and check end to end") {
  // Relies on the test running from the build tree with fixtures alongside
  // the sources; path injected by the harness via compile definition.
#ifdef INVKIT_FIXTURE_DIR
  const std::string dir = INVKIT_FIXTURE_DIR;
  const Problem ex1 = load_problem(dir + "/ex1_diamond.json");
  CHECK(run_check(ex1).verdict == Verdict::Invariant);
  const Problem bad_path_ok = load_problem(dir + "/ex3_disk_rotation.json");
  CHECK(bad_path_ok.tol.psd_tol == 0.0);
  CHECK_THROWS_AS(load_problem(dir + "/bad_ragged.json"), SchemaError);
#endif
}
