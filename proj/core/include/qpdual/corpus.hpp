#pragma once

#include <string>
#include <vector>

#include "qpdual/json_io.hpp"

namespace qpdual {

// Built-in regression instances. Expectations are only set where the
// value is pinned down analytically; NaN / empty means "not checked".
struct CorpusEntry {
  std::string name;
  std::string description;
  std::string json;
  double expected_value;          // NaN when not asserted
  std::string expected_gap;       // "", "zero_gap", "infinite_gap"
  bool expected_infeasible = false;
};

const std::vector<CorpusEntry>& builtin_corpus();

// Parses the named entry; throws std::out_of_range for unknown names.
ParsedInstance corpus_instance(const std::string& name);

}  // namespace qpdual
