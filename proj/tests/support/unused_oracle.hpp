#pragma once

#include <string>
#include <vector>

#include "nblint/dataflow.hpp"

namespace nblint::testsupport {

struct OracleFinding {
    std::string name;
    int cell_index = 0;
    int line = 1;
    int column = 0;  // 0-based, AST convention

    friend bool operator==(const OracleFinding&, const OracleFinding&) = default;
};

// Brute-force unused-variable search, independent of the production access
// table: builds its own context tree and event list, re-derives locality by
// rescanning events on every query, and checks each stored name against
// every load by exhaustive search. Policy semantics follow the same written
// rules as dataflow::UnusedPolicy.
std::vector<OracleFinding> oracle_unused(const std::vector<dataflow::CellAst>& cells,
                                         const dataflow::UnusedPolicy& policy = {});

}  // namespace nblint::testsupport
