#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace bpblab::acceptance {

struct CriterionResult {
  int id;
  std::string name;
  bool passed;
  std::string detail;
  double seconds;
  double budget_seconds;
};

struct Options {
  std::uint64_t seed = 20240611;
  int resolution = 4096;
};

CriterionResult extreme_census(const Options& opt);
CriterionResult clarkson_attainment(const Options& opt);
CriterionResult isometry_rigidity_constants(const Options& opt);
CriterionResult constructor_contracts(const Options& opt);
CriterionResult certificate_engine(const Options& opt);
CriterionResult hilbert_iff(const Options& opt);
CriterionResult rigidity_sweeps(const Options& opt);
CriterionResult property_p_witnesses(const Options& opt);
CriterionResult sbpbp_demo(const Options& opt);
CriterionResult hilbert_necessary(const Options& opt);

/// All criteria in order; `on_result` sees each one as soon as it finishes.
std::vector<CriterionResult> run_all(const Options& opt,
                                     const std::function<void(const CriterionResult&)>& on_result = {});

}  // namespace bpblab::acceptance
