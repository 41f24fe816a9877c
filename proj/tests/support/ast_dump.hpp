#pragma once

// Canonical pre-order text dump of a parsed module. One line per node with
// two-space indentation per depth; Name lines carry binding context and the
// full source span. The parser differential test compares this rendering
// against frozen reference dumps, and the refresh script regenerates those
// dumps with the same format.

#include <string>

#include "nblint/ast.hpp"

namespace nblint::testsupport {

std::string dump_module(const ast::Module& mod);

}  // namespace nblint::testsupport
