#pragma once

#include <string>
#include <vector>

#include "zetadyn/pipeline.hpp"

namespace zetadyn::verify {

struct Options {
  std::string zeros_path = "data/zeta_zeros.txt";
  std::string out_dir = "verify_out";
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Acceptance criteria. Each runs standalone and prints nothing; the caller
/// formats the pass/fail line.
CriterionResult criterion_lambda1(const Options& opt);            // 1
CriterionResult criterion_fixed_point_table(const Options& opt);  // 2
CriterionResult criterion_branch_fit(const Options& opt);         // 3
CriterionResult criterion_angular_limit(const Options& opt);      // 4
CriterionResult criterion_trivial_geometry(const Options& opt);   // 5
CriterionResult criterion_deviation_scaling(const Options& opt);  // 6
CriterionResult criterion_property_suite(const Options& opt);     // 7
CriterionResult criterion_determinism(const Options& opt);        // 8

CriterionResult run_criterion(int id, const Options& opt);

/// fast = criteria {2, 5, 7, 8}; full = all eight.
std::vector<int> suite_ids(bool full);

}  // namespace zetadyn::verify
