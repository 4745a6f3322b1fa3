#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qbench/config.hpp"

namespace qbench {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;    // measured values vs anchors; deterministic
  double runtime_s = 0;  // display only, never serialized

  CriterionResult() = default;
  CriterionResult(int id_, std::string name_) : id(id_), name(std::move(name_)) {}
};

// Run the numbered release criteria (all of them when `only` is empty).
// Criterion 13 re-runs the others at 1 and 8 threads and byte-compares the
// serialized results.
std::vector<CriterionResult> run_acceptance(int threads, std::uint64_t seed,
                                            const std::vector<int>& only = {});

// Deterministic serialization (no runtimes, no thread count).
Json acceptance_json(const std::vector<CriterionResult>& results,
                     const RunConfig& cfg, std::uint64_t seed);

}  // namespace qbench
