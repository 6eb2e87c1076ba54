#pragma once

#include <string>
#include <vector>

#include "jetpot/canonical.hpp"
#include "jetpot/garding.hpp"
#include "jetpot/subeq.hpp"

namespace jetpot {

// A named operator with its constraint set, boundary level, admissible
// levels and claimed monotonicity cone.
struct OperatorSpec {
  std::string name;
  json params;
  CompatiblePair pair;
  MonotonicityCone claimed_cone;
  std::string description;

  json metadata() const;
};

std::vector<std::string> catalog_names();
OperatorSpec catalog(const std::string& name, const json& params = json::object());

// Operator value; throws ConstraintViolation outside the constraint set
// (callers probing admissible supersolutions catch this deliberately).
double op_eval(const OperatorSpec& spec, const Jet& J);

Interval admissible_levels(const OperatorSpec& spec);

// Duality of the eigenvalue-gradient family: checks which printed index
// the dual margin actually matches, reporting the numerically valid one.
struct DualityRelationReport {
  bool reflection_index_holds{false};  // dual of F+_k matches F-_{n-k+1}
  bool shifted_index_holds{false};     // dual of F+_k matches F-_{n+k-1}
  double worst_gap_reflection{0};
  double worst_gap_shifted{0};
  long n_samples{0};
  uint64_t seed{0};
  json to_json() const;
};
DualityRelationReport duality_relation_check(int n, int k, double R, long samples,
                                             uint64_t seed);

}  // namespace jetpot
