#include "qpdual/json_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qpdual {

namespace {

using nlohmann::json;

Vector parse_vector(const json& j, const std::string& what) {
  if (!j.is_array()) throw ParseError(what + ": expected an array");
  Vector v;
  for (const auto& e : j) {
    if (!e.is_number()) throw ParseError(what + ": expected numbers");
    v.push_back(e.get<double>());
  }
  return v;
}

Matrix parse_matrix(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty())
    throw ParseError(what + ": expected a non-empty array of rows");
  std::size_t cols = 0;
  std::vector<Vector> rows;
  for (const auto& r : j) {
    Vector row = parse_vector(r, what + " row");
    if (rows.empty())
      cols = row.size();
    else if (row.size() != cols)
      throw ParseError(what + ": ragged rows");
    rows.push_back(std::move(row));
  }
  Matrix M(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t k = 0; k < cols; ++k) M(i, k) = rows[i][k];
  return M;
}

QuadraticForm parse_form(const json& j, const std::string& what) {
  if (!j.is_object()) throw ParseError(what + ": expected an object");
  QuadraticForm f;
  f.A = parse_matrix(j.at("A"), what + ".A");
  f.b = parse_vector(j.at("b"), what + ".b");
  f.c = j.value("c", 0.0);
  return f;
}

std::vector<Vector> parse_vector_list(const json& j, const std::string& what) {
  if (!j.is_array()) throw ParseError(what + ": expected an array");
  std::vector<Vector> out;
  for (const auto& e : j) out.push_back(parse_vector(e, what + " entry"));
  return out;
}

json dump_vector(const Vector& v) {
  json j = json::array();
  for (double x : v) j.push_back(x);
  return j;
}

json dump_matrix(const Matrix& M) {
  json j = json::array();
  for (std::size_t i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < M.cols(); ++k) row.push_back(M(i, k));
    j.push_back(std::move(row));
  }
  return j;
}

json dump_vector_list(const std::vector<Vector>& vs) {
  json j = json::array();
  for (const auto& v : vs) j.push_back(dump_vector(v));
  return j;
}

json dump_form(const QuadraticForm& f) {
  return json{{"A", dump_matrix(f.A)}, {"b", dump_vector(f.b)}, {"c", f.c}};
}

template <typename T>
void finish_validation(T& inst, ParsedInstance& out) {
  out.validation = validate(inst);
  if (!out.validation.ok()) {
    std::string msg = "invalid instance:";
    for (const auto& issue : out.validation.issues)
      if (issue.severity == ValidationIssue::Severity::error)
        msg += " " + issue.message + ";";
    throw ParseError(msg);
  }
}

}  // namespace

ParsedInstance parse_instance(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("JSON parse failure: ") + e.what());
  }
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw ParseError("missing string field \"kind\"");

  ParsedInstance out;
  out.kind = j["kind"].get<std::string>();
  try {
    if (out.kind == "qp") {
      out.qp.n = j.at("n").get<std::size_t>();
      out.qp.objective = parse_form(j.at("objective"), "objective");
      for (const auto& g : j.value("constraints", json::array()))
        out.qp.constraints.push_back(parse_form(g, "constraint"));
      finish_validation(out.qp, out);
    } else if (out.kind == "miqp") {
      out.miqp.n = j.at("n").get<std::size_t>();
      out.miqp.objective = parse_form(j.at("objective"), "objective");
      out.miqp.eq_normals =
          parse_vector_list(j.value("eq_normals", json::array()), "eq_normals");
      out.miqp.eq_rhs = parse_vector(j.value("eq_rhs", json::array()), "eq_rhs");
      out.miqp.s = j.value("s", std::size_t(0));
      finish_validation(out.miqp, out);
    } else if (out.kind == "hqp") {
      out.hqp.A = parse_matrix(j.at("A"), "A");
      out.hqp.B = parse_matrix(j.at("B"), "B");
      finish_validation(out.hqp, out);
    } else if (out.kind == "uniform") {
      out.uniform.n = j.at("n").get<std::size_t>();
      out.uniform.A = parse_matrix(j.at("A"), "A");
      out.uniform.b = parse_vector(j.at("b"), "b");
      out.uniform.c = j.value("c", 0.0);
      out.uniform.alphas = parse_vector(j.at("alphas"), "alphas");
      out.uniform.lin = parse_vector_list(j.at("lin"), "lin");
      out.uniform.consts = parse_vector(j.at("consts"), "consts");
      finish_validation(out.uniform, out);
    } else if (out.kind == "robust_miqp") {
      out.robust.n = j.at("n").get<std::size_t>();
      out.robust.A0 = parse_matrix(j.at("A0"), "A0");
      out.robust.rho = j.value("rho", 0.0);
      out.robust.c0 = parse_vector(j.at("c0"), "c0");
      out.robust.cost_generators = parse_vector_list(
          j.value("cost_generators", json::array()), "cost_generators");
      out.robust.scenarios =
          parse_vector_list(j.value("scenarios", json::array()), "scenarios");
      out.robust.eq_normals =
          parse_vector_list(j.value("eq_normals", json::array()), "eq_normals");
      out.robust.eq_rhs = parse_vector(j.value("eq_rhs", json::array()), "eq_rhs");
      out.robust.s = j.value("s", std::size_t(0));
      finish_validation(out.robust, out);
    } else {
      throw ParseError("unknown kind \"" + out.kind + "\"");
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("schema violation: ") + e.what());
  }
  return out;
}

ParsedInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

std::string to_json(const QPInstance& p, int indent) {
  json g = json::array();
  for (const auto& c : p.constraints) g.push_back(dump_form(c));
  json j{{"kind", "qp"},
         {"n", p.n},
         {"objective", dump_form(p.objective)},
         {"constraints", std::move(g)}};
  return j.dump(indent);
}

std::string to_json(const MixedIntegerQP& p, int indent) {
  json j{{"kind", "miqp"},
         {"n", p.n},
         {"objective", dump_form(p.objective)},
         {"eq_normals", dump_vector_list(p.eq_normals)},
         {"eq_rhs", dump_vector(p.eq_rhs)},
         {"s", p.s}};
  return j.dump(indent);
}

std::string to_json(const HQPInstance& p, int indent) {
  json j{{"kind", "hqp"}, {"A", dump_matrix(p.A)}, {"B", dump_matrix(p.B)}};
  return j.dump(indent);
}

std::string to_json(const UniformQPInstance& p, int indent) {
  json j{{"kind", "uniform"},
         {"n", p.n},
         {"A", dump_matrix(p.A)},
         {"b", dump_vector(p.b)},
         {"c", p.c},
         {"alphas", dump_vector(p.alphas)},
         {"lin", dump_vector_list(p.lin)},
         {"consts", dump_vector(p.consts)}};
  return j.dump(indent);
}

std::string to_json(const RobustMIQP& p, int indent) {
  json j{{"kind", "robust_miqp"},
         {"n", p.n},
         {"A0", dump_matrix(p.A0)},
         {"rho", p.rho},
         {"c0", dump_vector(p.c0)},
         {"cost_generators", dump_vector_list(p.cost_generators)},
         {"scenarios", dump_vector_list(p.scenarios)},
         {"eq_normals", dump_vector_list(p.eq_normals)},
         {"eq_rhs", dump_vector(p.eq_rhs)},
         {"s", p.s}};
  return j.dump(indent);
}

std::string to_json(const ParsedInstance& p, int indent) {
  if (p.kind == "qp") return to_json(p.qp, indent);
  if (p.kind == "miqp") return to_json(p.miqp, indent);
  if (p.kind == "hqp") return to_json(p.hqp, indent);
  if (p.kind == "uniform") return to_json(p.uniform, indent);
  if (p.kind == "robust_miqp") return to_json(p.robust, indent);
  throw ParseError("unknown kind \"" + p.kind + "\"");
}

}  // namespace qpdual
