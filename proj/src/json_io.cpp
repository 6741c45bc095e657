#include "invkit/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "invkit/errors.hpp"
#include "invkit/sets.hpp"

namespace invkit {

namespace {

using njson = nlohmann::ordered_json;

void require_keys(const njson& obj, const char* where,
                  std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : allowed)
      if (item.key() == k) known = true;
    if (!known)
      throw SchemaError(std::string(where) + ": unknown key '" + item.key() + "'");
  }
}

double parse_number(const njson& j, const std::string& where) {
  if (!j.is_number()) throw SchemaError(where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw SchemaError(where + ": value is not finite");
  return v;
}

Vector parse_vector(const njson& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw SchemaError(where + ": expected a nonempty array");
  Vector v;
  v.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    v.push_back(parse_number(j[i], where + "[" + std::to_string(i) + "]"));
  return v;
}

Matrix parse_matrix(const njson& j, const std::string& where) {
  if (!j.is_array() || j.empty())
    throw SchemaError(where + ": expected a nonempty array of rows");
  const std::size_t rows = j.size();
  Vector first = parse_vector(j[0], where + "[0]");
  Matrix M(rows, first.size());
  for (std::size_t c = 0; c < first.size(); ++c) M(0, c) = first[c];
  for (std::size_t r = 1; r < rows; ++r) {
    Vector row = parse_vector(j[r], where + "[" + std::to_string(r) + "]");
    if (row.size() != first.size()) throw SchemaError(where + ": ragged rows");
    for (std::size_t c = 0; c < row.size(); ++c) M(r, c) = row[c];
  }
  return M;
}

std::vector<Vector> parse_vector_list(const njson& j, const std::string& where) {
  if (!j.is_array()) throw SchemaError(where + ": expected an array of points");
  std::vector<Vector> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(parse_vector(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

SetDescription parse_set(const njson& j, const Tolerances& tol) {
  if (!j.is_object()) throw SchemaError("set: expected an object");
  if (!j.contains("type") || !j["type"].is_string())
    throw SchemaError("set.type: expected a string");
  const std::string type = j["type"].get<std::string>();

  try {
    if (type == "h_polyhedron") {
      require_keys(j, "set", {"type", "G", "b"});
      if (!j.contains("G") || !j.contains("b")) throw SchemaError("set: h_polyhedron needs G and b");
      return SetDescription::h_polyhedron(parse_matrix(j["G"], "set.G"),
                                          parse_vector(j["b"], "set.b"));
    }
    if (type == "h_cone") {
      require_keys(j, "set", {"type", "G"});
      if (!j.contains("G")) throw SchemaError("set: h_cone needs G");
      return SetDescription::h_cone(parse_matrix(j["G"], "set.G"));
    }
    if (type == "v_polyhedron") {
      require_keys(j, "set", {"type", "vertices", "rays"});
      if (!j.contains("vertices")) throw SchemaError("set: v_polyhedron needs vertices");
      std::vector<Vector> rays;
      if (j.contains("rays")) rays = parse_vector_list(j["rays"], "set.rays");
      return SetDescription::v_polyhedron(parse_vector_list(j["vertices"], "set.vertices"),
                                          std::move(rays));
    }
    if (type == "v_cone") {
      require_keys(j, "set", {"type", "rays"});
      if (!j.contains("rays")) throw SchemaError("set: v_cone needs rays");
      return SetDescription::v_cone(parse_vector_list(j["rays"], "set.rays"));
    }
    if (type == "ellipsoid" || type == "quadratic_set" || type == "lorenz_cone" ||
        type == "double_cone") {
      require_keys(j, "set", {"type", "Q"});
      if (!j.contains("Q")) throw SchemaError("set: " + type + " needs Q");
      Matrix Q = parse_matrix(j["Q"], "set.Q");
      if (type == "ellipsoid") return SetDescription::ellipsoid(std::move(Q));
      if (type == "quadratic_set") return SetDescription::quadratic_set(std::move(Q));
      if (type == "lorenz_cone") return SetDescription::lorenz_cone(std::move(Q), tol);
      return SetDescription::double_cone(std::move(Q), tol);
    }
  } catch (const WrongInertiaError& e) {
    throw ValidationError(std::string("set: ") + e.what());
  }
  throw SchemaError("set.type: unknown type '" + type + "'");
}

Tolerances parse_tolerances(const njson& j) {
  Tolerances tol;
  require_keys(j, "tolerances",
               {"eig_tol", "psd_tol", "singular_tol", "exp_tol", "lp_tol", "pivot_tol",
                "membership_tol", "mu_search_tol"});
  auto grab = [&](const char* key, double& slot) {
    if (!j.contains(key)) return;
    const double v = parse_number(j[key], std::string("tolerances.") + key);
    if (v < 0.0) throw SchemaError(std::string("tolerances.") + key + ": must be nonnegative");
    slot = v;
  };
  grab("eig_tol", tol.eig_tol);
  grab("psd_tol", tol.psd_tol);
  grab("singular_tol", tol.singular_tol);
  grab("exp_tol", tol.exp_tol);
  grab("lp_tol", tol.lp_tol);
  grab("pivot_tol", tol.pivot_tol);
  grab("membership_tol", tol.membership_tol);
  grab("mu_search_tol", tol.mu_search_tol);
  return tol;
}

njson matrix_to_json(const Matrix& M) {
  njson rows = njson::array();
  for (std::size_t i = 0; i < M.rows(); ++i) {
    njson row = njson::array();
    for (std::size_t j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const njson& j, const std::string& where) { return parse_matrix(j, where); }

}  // namespace

Problem parse_problem_text(const std::string& text) {
  njson j;
  try {
    j = njson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("problem document: ") + e.what());
  }
  if (!j.is_object()) throw SchemaError("problem document: expected an object");
  require_keys(j, "problem", {"system", "set", "tolerances", "seed", "x0"});
  if (!j.contains("system") || !j["system"].is_object())
    throw SchemaError("system: expected an object");
  if (!j.contains("set")) throw SchemaError("set: missing");

  const njson& sys = j["system"];
  require_keys(sys, "system", {"A", "time"});
  if (!sys.contains("A")) throw SchemaError("system.A: missing");
  if (!sys.contains("time") || !sys["time"].is_string())
    throw SchemaError("system.time: expected \"discrete\" or \"continuous\"");

  Problem p;
  p.A = parse_matrix(sys["A"], "system.A");
  if (!p.A.is_square()) throw SchemaError("system.A: must be square");
  const std::string time = sys["time"].get<std::string>();
  if (time == "discrete")
    p.discrete = true;
  else if (time == "continuous")
    p.discrete = false;
  else
    throw SchemaError("system.time: expected \"discrete\" or \"continuous\"");

  if (j.contains("tolerances")) {
    if (!j["tolerances"].is_object()) throw SchemaError("tolerances: expected an object");
    p.tol = parse_tolerances(j["tolerances"]);
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned())
      throw SchemaError("seed: expected a nonnegative integer");
    p.seed = j["seed"].get<std::uint64_t>();
  }

  p.set = parse_set(j["set"], p.tol);
  if (p.set.dim() != p.A.rows())
    throw SchemaError("set dimension " + std::to_string(p.set.dim()) +
                      " does not match system dimension " + std::to_string(p.A.rows()));

  const std::vector<std::string> issues = validate(p.set, p.tol);
  if (!issues.empty()) {
    std::string msg = "set description is unusable:";
    for (const auto& s : issues) msg += " " + s + ";";
    msg.pop_back();
    throw ValidationError(msg);
  }

  if (j.contains("x0")) {
    Vector x0 = parse_vector(j["x0"], "x0");
    if (x0.size() != p.A.rows()) throw SchemaError("x0: wrong dimension");
    p.x0 = std::move(x0);
  }
  return p;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Problem load_problem(const std::string& path) { return parse_problem_text(read_text_file(path)); }

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw ParseError("failed writing '" + path + "'");
}

std::string report_to_json_text(const Problem& problem, const CheckReport& report,
                                const std::string& command) {
  njson out;
  out["tool"] = kToolName;
  out["version"] = kToolVersion;
  out["command"] = command;
  out["time"] = problem.discrete ? "discrete" : "continuous";
  out["set_type"] = set_kind_name(problem.set.kind());
  out["dimension"] = problem.set.dim();
  out["seed"] = problem.seed;
  out["verdict"] = verdict_name(report.verdict);

  if (report.certificate.kind == Certificate::Kind::None) {
    out["certificate"] = nullptr;
  } else {
    njson c;
    c["kind"] = certificate_kind_name(report.certificate.kind);
    switch (report.certificate.kind) {
      case Certificate::Kind::NonnegMatrix:
      case Certificate::Kind::ODNonnegMatrix:
      case Certificate::Kind::VRepMatrix:
        c["matrix"] = matrix_to_json(report.certificate.M);
        break;
      case Certificate::Kind::ScalarLMI:
        c["scalar_kind"] = report.certificate.scalar_kind;
        c[report.certificate.scalar_kind] = report.certificate.scalar;
        c["lambda1"] = report.certificate.lambda1;
        break;
      case Certificate::Kind::SufficientOnly:
        c["lambda1"] = report.certificate.lambda1;
        break;
      case Certificate::Kind::None:
        break;
    }
    if (!report.certificate.side_conditions.empty()) {
      njson sc;
      for (const auto& [k, v] : report.certificate.side_conditions) sc[k] = v;
      c["side_conditions"] = std::move(sc);
    }
    out["certificate"] = std::move(c);
  }

  if (report.witness.has_value()) {
    njson w;
    w["point"] = report.witness->x;
    w["image"] = report.witness->image;
    w["violation"] = report.witness->violation;
    w["note"] = report.witness->note;
    out["witness"] = std::move(w);
  } else {
    out["witness"] = nullptr;
  }
  if (report.failed_index.has_value())
    out["failed_index"] = *report.failed_index;
  else
    out["failed_index"] = nullptr;

  njson diag;
  for (const auto& [k, v] : report.diagnostics) diag[k] = v;
  out["diagnostics"] = std::move(diag);

  njson tol;
  tol["eig_tol"] = report.tolerances.eig_tol;
  tol["psd_tol"] = report.tolerances.psd_tol;
  tol["singular_tol"] = report.tolerances.singular_tol;
  tol["exp_tol"] = report.tolerances.exp_tol;
  tol["lp_tol"] = report.tolerances.lp_tol;
  tol["pivot_tol"] = report.tolerances.pivot_tol;
  tol["membership_tol"] = report.tolerances.membership_tol;
  tol["mu_search_tol"] = report.tolerances.mu_search_tol;
  out["tolerances"] = std::move(tol);
  out["elapsed_seconds"] = report.elapsed_seconds;
  return out.dump(2) + "\n";
}

ReportVerification verify_report_files(const std::string& problem_path,
                                       const std::string& report_path) {
  ReportVerification rv;
  auto fail = [&rv](std::string s) {
    rv.ok = false;
    rv.violations.push_back(std::move(s));
  };

  const Problem problem = load_problem(problem_path);
  njson rj;
  try {
    rj = njson::parse(read_text_file(report_path));
  } catch (const nlohmann::json::parse_error& e) {
    fail(std::string("report document: ") + e.what());
    return rv;
  }
  if (!rj.is_object() || !rj.contains("verdict") || !rj["verdict"].is_string()) {
    fail("report document: missing verdict");
    return rv;
  }
  const std::string verdict = rj["verdict"].get<std::string>();

  if (verdict == "Invariant") {
    if (!rj.contains("certificate") || rj["certificate"].is_null()) {
      fail("Invariant report without a certificate");
      return rv;
    }
    const njson& c = rj["certificate"];
    if (!c.contains("kind") || !c["kind"].is_string()) {
      fail("certificate without a kind");
      return rv;
    }
    const std::string kind = c["kind"].get<std::string>();
    Certificate cert;
    if (kind == "nonneg_matrix")
      cert.kind = Certificate::Kind::NonnegMatrix;
    else if (kind == "od_nonneg_matrix")
      cert.kind = Certificate::Kind::ODNonnegMatrix;
    else if (kind == "vrep_matrix")
      cert.kind = Certificate::Kind::VRepMatrix;
    else if (kind == "scalar_lmi")
      cert.kind = Certificate::Kind::ScalarLMI;
    else if (kind == "sufficient_only")
      cert.kind = Certificate::Kind::SufficientOnly;
    else {
      fail("unknown certificate kind '" + kind + "'");
      return rv;
    }
    if (cert.kind == Certificate::Kind::ScalarLMI) {
      if (!c.contains("scalar_kind") || !c["scalar_kind"].is_string()) {
        fail("scalar certificate without scalar_kind");
        return rv;
      }
      cert.scalar_kind = c["scalar_kind"].get<std::string>();
      if (!c.contains(cert.scalar_kind) || !c[cert.scalar_kind].is_number()) {
        fail("scalar certificate without its '" + cert.scalar_kind + "' value");
        return rv;
      }
      cert.scalar = c[cert.scalar_kind].get<double>();
    }
    if (cert.kind == Certificate::Kind::NonnegMatrix ||
        cert.kind == Certificate::Kind::ODNonnegMatrix ||
        cert.kind == Certificate::Kind::VRepMatrix) {
      if (!c.contains("matrix")) {
        fail("matrix certificate without its matrix");
        return rv;
      }
      cert.M = matrix_from_json(c["matrix"], "certificate.matrix");
    }
    for (const auto& v :
         verify_certificate(problem.A, problem.set, problem.discrete, cert, problem.tol))
      fail(v);
    return rv;
  }

  if (verdict == "NotInvariant") {
    if (!rj.contains("witness") || rj["witness"].is_null()) {
      rv.violations.push_back("note: NotInvariant report without a witness (not replayable)");
      return rv;  // ok stays true: some cone refutations carry no point witness
    }
    const njson& w = rj["witness"];
    Witness wit;
    wit.x = parse_vector(w.at("point"), "witness.point");
    if (w.contains("note") && w["note"].is_string()) wit.note = w["note"].get<std::string>();
    std::string why;
    if (!witness_replays(problem, wit, why)) {
      if (wit.note.find("direction-level") != std::string::npos)
        rv.violations.push_back("note: direction-level witness does not replay (" + why + ")");
      else
        fail("witness does not replay: " + why);
    }
    return rv;
  }

  if (verdict == "Inconclusive") return rv;
  fail("unknown verdict '" + verdict + "'");
  return rv;
}

std::string trajectory_to_csv(const Trajectory& tr) {
  std::string out = "t";
  const std::size_t n = tr.states.empty() ? 0 : tr.states.front().size();
  for (std::size_t j = 1; j <= n; ++j) out += ",x" + std::to_string(j);
  out += "\n";
  char buf[64];
  for (std::size_t k = 0; k < tr.states.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", tr.times[k]);
    out += buf;
    for (double v : tr.states[k]) {
      std::snprintf(buf, sizeof buf, ",%.17g", v);
      out += buf;
    }
    out += "\n";
  }
  return out;
}

}  // namespace invkit
