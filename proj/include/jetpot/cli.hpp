#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "jetpot/report.hpp"

namespace jetpot {

// Front door used by main() and by the CLI tests. Exit codes:
//   0 success (a failure scenario that exhibits its failure is a success),
//   1 mathematical failure where a pass was expected,
//   2 usage or precondition error,
//   3 inconclusive (sampling starvation).
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Matrix shorthand: "I", "diag(a,b,...)" or a JSON array of rows.
Mat parse_matrix(const std::string& text, int n_hint = -1);

// Jet from JSON; the "A" entry may use the matrix shorthand as a string.
Jet parse_jet(const std::string& text, int n_hint = -1);

// "r,p...,I"-style shorthand for cone directions, e.g. "0,0,I" or "-1,0,I".
Jet parse_jet_shorthand(const std::string& text, int n);

}  // namespace jetpot
