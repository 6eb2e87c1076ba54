#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <string>

#include "jetpot/jets.hpp"

namespace jetpot {

using nlohmann::json;

// Outcome of a sampled or grid check.
struct VerificationReport {
  bool pass{false};
  bool inconclusive{false};
  long n_samples{0};
  double worst_margin{std::numeric_limits<double>::infinity()};
  std::optional<Jet> witness;
  std::optional<Jet> witness_pair;  // the cone/second jet of a violating pair
  uint64_t seed{0};
  std::string note;

  json to_json() const;
};

json jet_to_json(const Jet& J);
Jet jet_from_json(const json& j, int expect_dim = -1);
json mat_to_json(const Mat& A);
Mat mat_from_json(const json& j);

// Deterministic serialization: sorted keys (nlohmann objects sort by key),
// every number printed with %.12g.
std::string emit_json(const json& j, int indent = 2);
void write_text_file(const std::string& path, const std::string& contents);

}  // namespace jetpot
