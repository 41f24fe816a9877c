#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "nblint/ast.hpp"
#include "nblint/diagnostics.hpp"
#include "nblint/notebook.hpp"

namespace nblint::dataflow {

// ---------------------------------------------------------------------------
// Variable access table: every Name event of a cell chain, in traversal
// order. The traversal follows evaluation order (an assignment's value is
// walked before its targets), so "x = f(); x" yields
// [(f,Load), (x,Store), (x,Load)].

enum class AccessCtx { store, load, del_ };

const char* to_string(AccessCtx ctx);

struct AccessLocation {
    int cell_index = 0;  // code-cell position in the document (-1: synthetic)
    int line = 1;        // 1-based line within the cell's normalized source
    int column = 0;      // 0-based column, as the AST reports it

    friend bool operator==(const AccessLocation&, const AccessLocation&) = default;
    friend auto operator<=>(const AccessLocation&, const AccessLocation&) = default;
};

struct AccessEntry {
    std::string name;
    AccessCtx ctx = AccessCtx::load;
    AccessLocation location;
    int scope_id = 0;  // scope the event occurs in (textually)
    int ordinal = 0;   // global sequence number across the whole chain
    // Store introduced by an import statement binding.
    bool import_origin = false;
    // Store introduced by a function/lambda parameter.
    bool param_origin = false;
    // The read half of an augmented assignment target ("x" in "x += 1").
    // Recorded in the table but never counts as a use for flagging.
    bool aug_target_load = false;
};

enum class ScopeKind { notebook, function, class_scope, comprehension, lambda };

const char* to_string(ScopeKind kind);

struct Scope {
    int id = 0;
    ScopeKind kind = ScopeKind::notebook;
    int parent = -1;  // -1 for the notebook root
    // Names bound in this scope (stores, deletions, parameters), minus names
    // declared global/nonlocal here and walrus bindings hoisted out of
    // comprehensions. Finalized when the scope closes.
    std::set<std::string> locals;
    std::set<std::string> global_decls;
    std::set<std::string> nonlocal_decls;
};

struct VariableAccessTable {
    std::vector<AccessEntry> entries;  // ordinal order
    std::vector<Scope> scopes;         // scopes[0] is the notebook scope
    // A star import was seen somewhere: unresolved loads may refer to names
    // it introduced. Explicitly stored names are unaffected.
    bool saw_star_import = false;
    // Names exported via a top-level __all__ list/tuple of string literals.
    std::set<std::string> exported_names;
};

// One cell's AST. `module` is null for cells that did not parse; they occupy
// their position but contribute no entries.
struct CellAst {
    int cell_index = 0;
    const ast::Module* module = nullptr;
};

VariableAccessTable build_access_table(const std::vector<CellAst>& cells);

// Convenience overload: asts[i] belongs to chain.entries[i] (null where the
// cell did not parse).
VariableAccessTable build_access_table(const nb::CellChain& chain,
                                       const std::vector<const ast::Module*>& asts);

// Which scope's binding a use of `name` occurring in `scope_id` refers to,
// under lexical scoping: the scope itself if the name is local there, else
// the nearest enclosing non-class scope with the name local, else the
// notebook scope. global/nonlocal declarations redirect accordingly.
int resolve_binding_scope(const VariableAccessTable& table, const std::string& name,
                          int scope_id);

// ---------------------------------------------------------------------------
// Unused-variable detection: a binding (name, scope) with at least one Store
// and no counting Load resolving to it at or after its first Store.

struct UnusedPolicy {
    bool exclude_underscore = true;  // names starting with '_'
    bool exclude_parameters = true;  // function/lambda parameters
    bool exclude_imports = true;     // names bound by import statements
    bool exclude_exported = true;    // top-level names listed in __all__

    // Literal reading: no exclusions at all.
    static UnusedPolicy strict();
};

struct UnusedVariable {
    std::string name;
    AccessLocation defining_location;  // first Store
    int n_stores = 1;
    int scope_id = 0;  // binding scope

    friend bool operator==(const UnusedVariable&, const UnusedVariable&) = default;
};

std::vector<UnusedVariable> find_unused(const VariableAccessTable& table,
                                        const UnusedPolicy& policy = {});

// ---------------------------------------------------------------------------
// Binding enumeration and use witnesses. For every binding the analysis can
// say either "unused" or exactly why not: a concrete Load entry, or the
// policy rule that excluded it.

struct BindingInfo {
    std::string name;
    int scope_id = 0;  // binding scope
    AccessLocation first_store;
    int first_store_ordinal = 0;
    int n_stores = 0;
    bool import_origin = false;  // any store came from an import
    bool param_origin = false;   // any store came from a parameter
};

std::vector<BindingInfo> collect_bindings(const VariableAccessTable& table);

struct UseWitness {
    enum class Kind { load, underscore_name, parameter, import_binding, exported };
    Kind kind = Kind::load;
    std::optional<AccessEntry> load;  // set when kind == load
};

// Why the binding (name, scope_id) is not flagged; nullopt when it is unused
// (or does not exist).
std::optional<UseWitness> explain_use(const VariableAccessTable& table, const std::string& name,
                                      int scope_id, const UnusedPolicy& policy = {});

// ---------------------------------------------------------------------------
// Diagnostics layer.

struct DataflowOptions {
    UnusedPolicy policy;
    bool report_dead_stores = false;     // U002: per-store, within used bindings
    bool report_unused_imports = false;  // U003: unused import bindings
};

// U001 unused variable; U002 dead store (off by default); U003 unused import
// (off by default). Sorted by (cell, line, column, code).
std::vector<Diagnostic> analyze_chain(const nb::CellChain& chain,
                                      const std::vector<const ast::Module*>& asts,
                                      const DataflowOptions& options = {});

// (number of notebooks with at least one finding, total findings).
std::pair<int, int> unused_summary(const std::vector<std::vector<UnusedVariable>>& per_notebook);

}  // namespace nblint::dataflow
