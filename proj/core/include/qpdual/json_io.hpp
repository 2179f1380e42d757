#pragma once

#include <stdexcept>
#include <string>

#include "qpdual/qp_model.hpp"

namespace qpdual {

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Tagged union over the five instance kinds; only the member matching
// `kind` is populated.
struct ParsedInstance {
  std::string kind;  // "qp" | "miqp" | "hqp" | "uniform" | "robust_miqp"
  QPInstance qp;
  MixedIntegerQP miqp;
  HQPInstance hqp;
  UniformQPInstance uniform;
  RobustMIQP robust;
  ValidationReport validation;
};

// Throws ParseError on malformed JSON, unknown kind, or validation errors.
// Matrices are symmetrized on load (reported as a warning in `validation`).
ParsedInstance parse_instance(const std::string& json_text);
ParsedInstance load_instance(const std::string& path);

std::string to_json(const QPInstance& p, int indent = 2);
std::string to_json(const MixedIntegerQP& p, int indent = 2);
std::string to_json(const HQPInstance& p, int indent = 2);
std::string to_json(const UniformQPInstance& p, int indent = 2);
std::string to_json(const RobustMIQP& p, int indent = 2);
std::string to_json(const ParsedInstance& p, int indent = 2);

}  // namespace qpdual
