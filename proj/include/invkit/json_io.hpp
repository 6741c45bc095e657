#pragma once

#include <string>
#include <vector>

#include "invkit/conditions.hpp"
#include "invkit/oracle.hpp"
#include "invkit/problem.hpp"

namespace invkit {

inline constexpr const char* kToolName = "invkit";
inline constexpr const char* kToolVersion = "0.1.0";

// Parses a problem document:
//   {"system": {"A": [[...]], "time": "discrete"|"continuous"},
//    "set": {"type": "...", ...},
//    "tolerances": {...}, "seed": 0, "x0": [...]}
// Throws ParseError on malformed JSON, SchemaError on structural problems
// (unknown keys, wrong types, ragged matrices), ValidationError when the set
// description itself is unusable.
Problem parse_problem_text(const std::string& text);
Problem load_problem(const std::string& path);

// Serializes a finished check as a self-contained JSON report (verdict,
// certificate with row-major matrices, witness, diagnostics, tolerances,
// tool version and seed).
std::string report_to_json_text(const Problem& problem, const CheckReport& report,
                                const std::string& command);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

struct ReportVerification {
  bool ok = true;
  std::vector<std::string> violations;
};

// Re-checks a written report against its problem file alone: Invariant
// reports must carry a certificate that still verifies, NotInvariant reports
// a witness that still replays.
ReportVerification verify_report_files(const std::string& problem_path,
                                       const std::string& report_path);

// CSV with header "t,x1,...,xn".
std::string trajectory_to_csv(const Trajectory& tr);

}  // namespace invkit
