#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nblint/diagnostics.hpp"
#include "nblint/source.hpp"

namespace nblint::style {

enum class RulePhase { physical, logical, blank_structure };

const char* to_string(RulePhase p);

struct StyleRule {
    std::string code;
    std::string message_template;
    RulePhase phase = RulePhase::logical;
    bool enabled = true;
    // File-end bookkeeping codes (W292) are kept out of ratios and top-N
    // statistics so multi-cell documents compare fairly against scripts.
    bool excluded_from_stats = false;
};

// The documented rule set: exactly 14 rules.
std::vector<StyleRule> rule_catalog();

// Every code the engine can emit, catalog plus companions that share a
// ported scan (sorted). Companions matter for differential testing and for
// explicit `select` requests.
const std::vector<std::string>& implemented_codes();

// Codes emitted when no explicit selection is given: the catalog plus E202
// and E203, which share E201's whitespace scan and are reported by the
// reference checker on the same inputs.
const std::vector<std::string>& default_codes();

struct RuleConfig {
    int max_line_length = 79;
    // Code prefixes ("E2", "W291"). A non-empty `select` replaces the
    // default set with the matching implemented codes; `ignore` then removes
    // matching codes. With both empty, `all_checks` widens the default set
    // to every implemented code.
    std::vector<std::string> select;
    std::vector<std::string> ignore;
    bool all_checks = false;

    static RuleConfig with_all_checks();

    std::set<std::string> enabled_codes() const;
    bool is_enabled(const std::string& code) const;
};

// Check one analyzable source. Physical rules run even when tokenization
// fails; diagnostics map through the source's line map, skip suppressed
// (magic) lines, and come back sorted by (line, column, code). `cell_index`
// tags notebook-cell diagnostics and is empty for scripts.
std::vector<Diagnostic> check_source(const PythonSource& src, const RuleConfig& config,
                                     const std::string& path,
                                     std::optional<int> cell_index = std::nullopt);

// Style findings per line of code. Codes marked excluded_from_stats (W292)
// are skipped unless `include_file_end_rules`. Empty result means "n/a"
// (loc == 0); never divides by zero.
std::optional<double> error_ratio(const std::vector<Diagnostic>& diags, long long loc,
                                  bool include_file_end_rules = false);

// True for codes kept out of statistics by default (W292 and other
// end-of-file bookkeeping codes).
bool is_file_end_code(const std::string& code);

}  // namespace nblint::style
