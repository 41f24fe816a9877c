#include "nblint/dataflow.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <utility>

#include "nblint/text.hpp"

namespace nblint::dataflow {

const char* to_string(AccessCtx ctx) {
    switch (ctx) {
        case AccessCtx::store: return "Store";
        case AccessCtx::load: return "Load";
        case AccessCtx::del_: return "Del";
    }
    return "?";
}

const char* to_string(ScopeKind kind) {
    switch (kind) {
        case ScopeKind::notebook: return "notebook";
        case ScopeKind::function: return "function";
        case ScopeKind::class_scope: return "class";
        case ScopeKind::comprehension: return "comprehension";
        case ScopeKind::lambda: return "lambda";
    }
    return "?";
}

UnusedPolicy UnusedPolicy::strict() {
    UnusedPolicy p;
    p.exclude_underscore = false;
    p.exclude_parameters = false;
    p.exclude_imports = false;
    p.exclude_exported = false;
    return p;
}

namespace {

using namespace nblint::ast;

std::string utf8(const std::u32string& s) { return text::encode_utf8(s); }

// Walks cell ASTs in evaluation order: an assignment's value before its
// targets, a for-loop's iterable before its targets, decorators and defaults
// before a function's name, the first generator's iterable in the enclosing
// scope. Name events are appended to the table as they are encountered.
class TableBuilder {
public:
    VariableAccessTable build(const std::vector<CellAst>& cells) {
        Scope root;
        root.id = 0;
        root.kind = ScopeKind::notebook;
        root.parent = -1;
        table_.scopes.push_back(root);
        stack_.push_back(0);
        for (const CellAst& cell : cells) {
            cell_ = cell.cell_index;
            if (cell.module == nullptr) continue;
            for (const auto& stmt : cell.module->body) walk_stmt(*stmt);
        }
        finalize_scope(0);
        return std::move(table_);
    }

private:
    VariableAccessTable table_;
    std::vector<int> stack_;
    std::map<int, std::set<std::string>> pending_locals_;
    int cell_ = 0;

    int cur() const { return stack_.back(); }
    Scope& cur_scope() { return table_.scopes[static_cast<size_t>(cur())]; }

    int open_scope(ScopeKind kind) {
        Scope s;
        s.id = static_cast<int>(table_.scopes.size());
        s.kind = kind;
        s.parent = cur();
        table_.scopes.push_back(std::move(s));
        stack_.push_back(static_cast<int>(table_.scopes.size()) - 1);
        return cur();
    }

    void close_scope() {
        finalize_scope(cur());
        stack_.pop_back();
    }

    // Locals become final only when the scope closes: global/nonlocal
    // declarations anywhere in the body remove the name from the local set.
    void finalize_scope(int id) {
        Scope& s = table_.scopes[static_cast<size_t>(id)];
        s.locals = std::move(pending_locals_[id]);
        for (const auto& n : s.global_decls) s.locals.erase(n);
        for (const auto& n : s.nonlocal_decls) s.locals.erase(n);
    }

    AccessLocation loc(const Span& sp) const { return {cell_, sp.first_line, sp.first_col}; }

    void emit(std::string name, AccessCtx ctx, AccessLocation where, bool import_origin = false,
              bool param_origin = false, bool aug_target_load = false) {
        AccessEntry e;
        e.name = std::move(name);
        e.ctx = ctx;
        e.location = where;
        e.scope_id = cur();
        e.ordinal = static_cast<int>(table_.entries.size());
        e.import_origin = import_origin;
        e.param_origin = param_origin;
        e.aug_target_load = aug_target_load;
        table_.entries.push_back(std::move(e));
    }

    void bind_local(const std::string& name, int scope) { pending_locals_[scope].insert(name); }

    // Walrus targets inside comprehensions bind in the nearest enclosing
    // non-comprehension scope.
    int hoist_out_of_comprehensions(int scope) const {
        while (table_.scopes[static_cast<size_t>(scope)].kind == ScopeKind::comprehension)
            scope = table_.scopes[static_cast<size_t>(scope)].parent;
        return scope;
    }

    // ---- statements -------------------------------------------------------

    void walk_body(const std::vector<StmtPtr>& body) {
        for (const auto& stmt : body) walk_stmt(*stmt);
    }

    void walk_stmt(const Stmt& stmt) {
        std::visit([&](const auto& node) { stmt_node(node, stmt); }, stmt.node);
    }

    void stmt_node(const FunctionDefStmt& f, const Stmt& stmt) {
        for (const auto& d : f.decorators) walk_expr(*d);
        walk_parameter_context(f.args);
        if (f.returns) walk_expr(*f.returns);
        emit(utf8(f.name), AccessCtx::store, loc(stmt.span));
        bind_local(utf8(f.name), cur());
        open_scope(ScopeKind::function);
        store_parameters(f.args);
        walk_body(f.body);
        close_scope();
    }

    void stmt_node(const ClassDefStmt& c, const Stmt& stmt) {
        for (const auto& d : c.decorators) walk_expr(*d);
        for (const auto& b : c.bases) walk_expr(*b);
        for (const auto& kw : c.keywords) walk_expr(*kw.value);
        open_scope(ScopeKind::class_scope);
        walk_body(c.body);
        close_scope();
        emit(utf8(c.name), AccessCtx::store, loc(stmt.span));
        bind_local(utf8(c.name), cur());
    }

    void stmt_node(const ReturnStmt& r, const Stmt&) {
        if (r.value) walk_expr(*r.value);
    }

    void stmt_node(const DeleteStmt& d, const Stmt&) {
        for (const auto& t : d.targets) walk_expr(*t);
    }

    void stmt_node(const AssignStmt& a, const Stmt&) {
        walk_expr(*a.value);
        for (const auto& t : a.targets) walk_expr(*t);
        if (cur() == 0) harvest_exports(a);
    }

    void stmt_node(const AugAssignStmt& a, const Stmt&) {
        if (const auto* name = a.target->as<NameExpr>()) {
            // The read half precedes the value; it never counts as a use.
            emit(utf8(name->id), AccessCtx::load, loc(a.target->span), false, false, true);
            walk_expr(*a.value);
            emit(utf8(name->id), AccessCtx::store, loc(a.target->span));
            bind_local(utf8(name->id), cur());
            if (cur() == 0) harvest_aug_exports(a);
        } else {
            walk_expr(*a.target);  // inner names of a.b / a[i] are plain loads
            walk_expr(*a.value);
        }
    }

    void stmt_node(const AnnAssignStmt& a, const Stmt&) {
        if (a.value) walk_expr(*a.value);
        walk_expr(*a.target);
        walk_expr(*a.annotation);
    }

    void stmt_node(const ForStmt& f, const Stmt&) {
        walk_expr(*f.iter);
        walk_expr(*f.target);
        walk_body(f.body);
        walk_body(f.orelse);
    }

    void stmt_node(const WhileStmt& w, const Stmt&) {
        walk_expr(*w.test);
        walk_body(w.body);
        walk_body(w.orelse);
    }

    void stmt_node(const IfStmt& i, const Stmt&) {
        walk_expr(*i.test);
        walk_body(i.body);
        walk_body(i.orelse);
    }

    void stmt_node(const WithStmt& w, const Stmt&) {
        for (const auto& item : w.items) {
            walk_expr(*item.context);
            if (item.target) walk_expr(*item.target);
        }
        walk_body(w.body);
    }

    void stmt_node(const RaiseStmt& r, const Stmt&) {
        if (r.exc) walk_expr(*r.exc);
        if (r.cause) walk_expr(*r.cause);
    }

    void stmt_node(const TryStmt& t, const Stmt&) {
        walk_body(t.body);
        for (const auto& h : t.handlers) {
            if (h.type) walk_expr(*h.type);
            if (h.name) {
                emit(utf8(*h.name), AccessCtx::store, loc(h.span));
                bind_local(utf8(*h.name), cur());
            }
            walk_body(h.body);
        }
        walk_body(t.orelse);
        walk_body(t.finalbody);
    }

    void stmt_node(const AssertStmt& a, const Stmt&) {
        walk_expr(*a.test);
        if (a.msg) walk_expr(*a.msg);
    }

    void stmt_node(const ImportStmt& imp, const Stmt&) {
        for (const auto& alias : imp.names) {
            // `import a.b.c` binds `a`; an asname binds that name instead.
            std::u32string bound = alias.asname ? *alias.asname : alias.name;
            if (!alias.asname) {
                auto dot = bound.find(U'.');
                if (dot != std::u32string::npos) bound.resize(dot);
            }
            emit(utf8(bound), AccessCtx::store, loc(alias.span), /*import_origin=*/true);
            bind_local(utf8(bound), cur());
        }
    }

    void stmt_node(const ImportFromStmt& imp, const Stmt&) {
        for (const auto& alias : imp.names) {
            if (alias.name == U"*") {
                table_.saw_star_import = true;
                continue;
            }
            const std::u32string& bound = alias.asname ? *alias.asname : alias.name;
            emit(utf8(bound), AccessCtx::store, loc(alias.span), /*import_origin=*/true);
            bind_local(utf8(bound), cur());
        }
    }

    void stmt_node(const GlobalStmt& g, const Stmt&) {
        for (const auto& n : g.names) cur_scope().global_decls.insert(utf8(n));
    }

    void stmt_node(const NonlocalStmt& n, const Stmt&) {
        for (const auto& name : n.names) cur_scope().nonlocal_decls.insert(utf8(name));
    }

    void stmt_node(const ExprStmt& e, const Stmt&) { walk_expr(*e.value); }

    void stmt_node(const PassStmt&, const Stmt&) {}
    void stmt_node(const BreakStmt&, const Stmt&) {}
    void stmt_node(const ContinueStmt&, const Stmt&) {}

    // ---- expressions ------------------------------------------------------

    void walk_expr(const Expr& expr) {
        std::visit([&](const auto& node) { expr_node(node, expr); }, expr.node);
    }

    void expr_node(const BoolOpExpr& b, const Expr&) {
        for (const auto& v : b.values) walk_expr(*v);
    }

    void expr_node(const NamedExprExpr& n, const Expr&) {
        walk_expr(*n.value);
        const auto* name = n.target->as<NameExpr>();
        // The parser guarantees a plain Name target.
        if (name != nullptr) {
            emit(utf8(name->id), AccessCtx::store, loc(n.target->span));
            bind_local(utf8(name->id), hoist_out_of_comprehensions(cur()));
        }
    }

    void expr_node(const BinOpExpr& b, const Expr&) {
        walk_expr(*b.left);
        walk_expr(*b.right);
    }

    void expr_node(const UnaryOpExpr& u, const Expr&) { walk_expr(*u.operand); }

    void expr_node(const LambdaExpr& l, const Expr&) {
        walk_parameter_context(l.args);
        open_scope(ScopeKind::lambda);
        store_parameters(l.args);
        walk_expr(*l.body);
        close_scope();
    }

    void expr_node(const IfExpExpr& i, const Expr&) {
        walk_expr(*i.test);
        walk_expr(*i.body);
        walk_expr(*i.orelse);
    }

    void expr_node(const DictExpr& d, const Expr&) {
        for (size_t i = 0; i < d.values.size(); ++i) {
            if (d.keys[i]) walk_expr(*d.keys[i]);
            walk_expr(*d.values[i]);
        }
    }

    void expr_node(const SetExpr& s, const Expr&) {
        for (const auto& e : s.elts) walk_expr(*e);
    }

    void expr_node(const ListCompExpr& c, const Expr&) {
        walk_comprehension(c.generators, [&] { walk_expr(*c.elt); });
    }

    void expr_node(const SetCompExpr& c, const Expr&) {
        walk_comprehension(c.generators, [&] { walk_expr(*c.elt); });
    }

    void expr_node(const DictCompExpr& c, const Expr&) {
        walk_comprehension(c.generators, [&] {
            walk_expr(*c.key);
            walk_expr(*c.value);
        });
    }

    void expr_node(const GeneratorExpExpr& c, const Expr&) {
        walk_comprehension(c.generators, [&] { walk_expr(*c.elt); });
    }

    void expr_node(const AwaitExpr& a, const Expr&) { walk_expr(*a.value); }

    void expr_node(const YieldExpr& y, const Expr&) {
        if (y.value) walk_expr(*y.value);
    }

    void expr_node(const YieldFromExpr& y, const Expr&) { walk_expr(*y.value); }

    void expr_node(const CompareExpr& c, const Expr&) {
        walk_expr(*c.left);
        for (const auto& comp : c.comparators) walk_expr(*comp);
    }

    void expr_node(const CallExpr& c, const Expr&) {
        walk_expr(*c.func);
        for (const auto& a : c.args) walk_expr(*a);
        for (const auto& kw : c.keywords) walk_expr(*kw.value);
    }

    void expr_node(const FormattedValueExpr& f, const Expr&) {
        walk_expr(*f.value);
        if (f.format_spec) walk_expr(*f.format_spec);
    }

    void expr_node(const JoinedStrExpr& j, const Expr&) {
        for (const auto& v : j.values) walk_expr(*v);
    }

    void expr_node(const ConstantExpr&, const Expr&) {}

    void expr_node(const AttributeExpr& a, const Expr&) {
        // Attribute names are not variables; only the object expression is.
        walk_expr(*a.value);
    }

    void expr_node(const SubscriptExpr& s, const Expr&) {
        walk_expr(*s.value);
        walk_expr(*s.slice);
    }

    void expr_node(const StarredExpr& s, const Expr&) { walk_expr(*s.value); }

    void expr_node(const NameExpr& n, const Expr& expr) {
        const std::string name = utf8(n.id);
        switch (n.ctx) {
            case Ctx::load:
                emit(name, AccessCtx::load, loc(expr.span));
                break;
            case Ctx::store:
                emit(name, AccessCtx::store, loc(expr.span));
                bind_local(name, cur());
                break;
            case Ctx::del_:
                emit(name, AccessCtx::del_, loc(expr.span));
                bind_local(name, cur());  // deletion makes the name local too
                break;
        }
    }

    void expr_node(const ListExpr& l, const Expr&) {
        for (const auto& e : l.elts) walk_expr(*e);
    }

    void expr_node(const TupleExpr& t, const Expr&) {
        for (const auto& e : t.elts) walk_expr(*e);
    }

    void expr_node(const SliceExpr& s, const Expr&) {
        if (s.lower) walk_expr(*s.lower);
        if (s.upper) walk_expr(*s.upper);
        if (s.step) walk_expr(*s.step);
    }

    // ---- shared pieces ----------------------------------------------------

    // Defaults and annotations are evaluated in the scope enclosing the
    // function, before the function object exists.
    void walk_parameter_context(const Arguments& args) {
        for (const auto& d : args.defaults) walk_expr(*d);
        for (const auto& d : args.kw_defaults)
            if (d) walk_expr(*d);
        auto annotation = [&](const Arg& a) {
            if (a.annotation) walk_expr(*a.annotation);
        };
        for (const auto& a : args.posonly) annotation(a);
        for (const auto& a : args.args) annotation(a);
        if (args.vararg) annotation(*args.vararg);
        for (const auto& a : args.kwonly) annotation(a);
        if (args.kwarg) annotation(*args.kwarg);
    }

    void store_parameters(const Arguments& args) {
        auto param = [&](const Arg& a) {
            emit(utf8(a.name), AccessCtx::store, loc(a.span), false, /*param_origin=*/true);
            bind_local(utf8(a.name), cur());
        };
        for (const auto& a : args.posonly) param(a);
        for (const auto& a : args.args) param(a);
        if (args.vararg) param(*args.vararg);
        for (const auto& a : args.kwonly) param(a);
        if (args.kwarg) param(*args.kwarg);
    }

    template <typename ElementWalk>
    void walk_comprehension(const std::vector<Comprehension>& generators, ElementWalk&& element) {
        // The first iterable is evaluated where the comprehension appears;
        // everything else lives in the comprehension's own scope.
        walk_expr(*generators.front().iter);
        open_scope(ScopeKind::comprehension);
        for (size_t i = 0; i < generators.size(); ++i) {
            if (i > 0) walk_expr(*generators[i].iter);
            walk_expr(*generators[i].target);
            for (const auto& cond : generators[i].ifs) walk_expr(*cond);
        }
        element();
        close_scope();
    }

    // __all__ = ["name", ...] at notebook scope marks names as exported.
    void harvest_exports(const AssignStmt& a) {
        bool to_all = false;
        for (const auto& t : a.targets) {
            const auto* name = t->as<NameExpr>();
            if (name && name->id == U"__all__") to_all = true;
        }
        if (to_all) harvest_export_list(*a.value);
    }

    void harvest_aug_exports(const AugAssignStmt& a) {
        const auto* name = a.target->as<NameExpr>();
        if (name && name->id == U"__all__") harvest_export_list(*a.value);
    }

    void harvest_export_list(const Expr& value) {
        const std::vector<ExprPtr>* elts = nullptr;
        if (const auto* list = value.as<ListExpr>()) elts = &list->elts;
        if (const auto* tup = value.as<TupleExpr>()) elts = &tup->elts;
        if (const auto* set = value.as<SetExpr>()) elts = &set->elts;
        if (elts == nullptr) return;
        for (const auto& e : *elts) {
            const auto* c = e->as<ConstantExpr>();
            if (c && c->kind == ConstantKind::string) table_.exported_names.insert(utf8(c->value));
        }
    }
};

struct BindingKey {
    int scope_id;
    std::string name;
    friend bool operator<(const BindingKey& a, const BindingKey& b) {
        return std::tie(a.scope_id, a.name) < std::tie(b.scope_id, b.name);
    }
};

bool excluded_by_policy(const VariableAccessTable& table, const BindingInfo& binding,
                        const UnusedPolicy& policy) {
    if (policy.exclude_underscore && !binding.name.empty() && binding.name[0] == '_') return true;
    if (policy.exclude_parameters && binding.param_origin) return true;
    if (policy.exclude_imports && binding.import_origin) return true;
    if (policy.exclude_exported && binding.scope_id == 0 &&
        table.exported_names.count(binding.name) > 0)
        return true;
    return false;
}

std::map<BindingKey, BindingInfo> binding_map(const VariableAccessTable& table) {
    std::map<BindingKey, BindingInfo> map;
    for (const AccessEntry& entry : table.entries) {
        if (entry.ctx != AccessCtx::store) continue;
        const int scope = resolve_binding_scope(table, entry.name, entry.scope_id);
        BindingInfo& info = map[{scope, entry.name}];
        if (info.n_stores == 0) {
            info.name = entry.name;
            info.scope_id = scope;
            info.first_store = entry.location;
            info.first_store_ordinal = entry.ordinal;
        }
        ++info.n_stores;
        info.import_origin = info.import_origin || entry.import_origin;
        info.param_origin = info.param_origin || entry.param_origin;
    }
    return map;
}

// Loads that count toward "used": resolving to the binding, at or after its
// first store, and not the read half of an augmented assignment.
bool counting_load(const VariableAccessTable& table, const AccessEntry& entry,
                   const BindingInfo& binding) {
    if (entry.ctx != AccessCtx::load || entry.aug_target_load) return false;
    if (entry.name != binding.name) return false;
    if (entry.ordinal < binding.first_store_ordinal) return false;
    return resolve_binding_scope(table, entry.name, entry.scope_id) == binding.scope_id;
}

}  // namespace

VariableAccessTable build_access_table(const std::vector<CellAst>& cells) {
    return TableBuilder().build(cells);
}

VariableAccessTable build_access_table(const nb::CellChain& chain,
                                       const std::vector<const ast::Module*>& asts) {
    std::vector<CellAst> cells;
    cells.reserve(chain.entries.size());
    for (size_t i = 0; i < chain.entries.size(); ++i) {
        const ast::Module* module = i < asts.size() ? asts[i] : nullptr;
        cells.push_back({chain.entries[i].code_cell.index_in_document, module});
    }
    return build_access_table(cells);
}

int resolve_binding_scope(const VariableAccessTable& table, const std::string& name,
                          int scope_id) {
    const auto& scopes = table.scopes;
    const Scope& start = scopes[static_cast<size_t>(scope_id)];

    if (start.global_decls.count(name) > 0) return 0;

    if (start.nonlocal_decls.count(name) > 0) {
        // Nearest enclosing function-like scope where the name is local,
        // chaining through further nonlocal declarations.
        int p = start.parent;
        while (p >= 0) {
            const Scope& ps = scopes[static_cast<size_t>(p)];
            const bool function_like = ps.kind == ScopeKind::function ||
                                       ps.kind == ScopeKind::lambda ||
                                       ps.kind == ScopeKind::comprehension;
            if (function_like && ps.nonlocal_decls.count(name) == 0 && ps.locals.count(name) > 0)
                return ps.id;
            p = ps.parent;
        }
        return 0;  // would be a syntax error in real code; fall back to top level
    }

    if (start.locals.count(name) > 0) return scope_id;

    // Walk outward. Class scopes are not visible from scopes nested inside
    // them (only from their own body, handled above).
    int p = start.parent;
    while (p >= 0) {
        const Scope& ps = scopes[static_cast<size_t>(p)];
        if (ps.kind != ScopeKind::class_scope && ps.locals.count(name) > 0) return ps.id;
        p = ps.parent;
    }
    return 0;  // top level (possibly a builtin or an unresolved name)
}

std::vector<BindingInfo> collect_bindings(const VariableAccessTable& table) {
    std::vector<BindingInfo> out;
    for (auto& [key, info] : binding_map(table)) out.push_back(info);
    std::sort(out.begin(), out.end(), [](const BindingInfo& a, const BindingInfo& b) {
        return a.first_store_ordinal < b.first_store_ordinal;
    });
    return out;
}

std::vector<UnusedVariable> find_unused(const VariableAccessTable& table,
                                        const UnusedPolicy& policy) {
    auto bindings = binding_map(table);

    std::set<BindingKey> used;
    for (const AccessEntry& entry : table.entries) {
        if (entry.ctx != AccessCtx::load || entry.aug_target_load) continue;
        const int scope = resolve_binding_scope(table, entry.name, entry.scope_id);
        auto it = bindings.find({scope, entry.name});
        if (it == bindings.end()) continue;
        if (entry.ordinal >= it->second.first_store_ordinal) used.insert({scope, entry.name});
    }

    std::vector<UnusedVariable> out;
    for (const auto& [key, info] : bindings) {
        if (used.count(key) > 0) continue;
        if (excluded_by_policy(table, info, policy)) continue;
        UnusedVariable u;
        u.name = info.name;
        u.defining_location = info.first_store;
        u.n_stores = info.n_stores;
        u.scope_id = info.scope_id;
        out.push_back(std::move(u));
    }
    std::sort(out.begin(), out.end(), [](const UnusedVariable& a, const UnusedVariable& b) {
        return std::tie(a.defining_location, a.name) < std::tie(b.defining_location, b.name);
    });
    return out;
}

std::optional<UseWitness> explain_use(const VariableAccessTable& table, const std::string& name,
                                      int scope_id, const UnusedPolicy& policy) {
    auto bindings = binding_map(table);
    auto it = bindings.find({scope_id, name});
    if (it == bindings.end()) return std::nullopt;
    const BindingInfo& info = it->second;

    UseWitness witness;
    if (policy.exclude_underscore && !name.empty() && name[0] == '_') {
        witness.kind = UseWitness::Kind::underscore_name;
        return witness;
    }
    if (policy.exclude_parameters && info.param_origin) {
        witness.kind = UseWitness::Kind::parameter;
        return witness;
    }
    if (policy.exclude_imports && info.import_origin) {
        witness.kind = UseWitness::Kind::import_binding;
        return witness;
    }
    if (policy.exclude_exported && scope_id == 0 && table.exported_names.count(name) > 0) {
        witness.kind = UseWitness::Kind::exported;
        return witness;
    }
    for (const AccessEntry& entry : table.entries) {
        if (counting_load(table, entry, info)) {
            witness.kind = UseWitness::Kind::load;
            witness.load = entry;
            return witness;
        }
    }
    return std::nullopt;
}

std::vector<Diagnostic> analyze_chain(const nb::CellChain& chain,
                                      const std::vector<const ast::Module*>& asts,
                                      const DataflowOptions& options) {
    const VariableAccessTable table = build_access_table(chain, asts);
    std::vector<Diagnostic> diags;

    auto add = [&](const std::string& code, std::string message, const AccessLocation& at) {
        diags.push_back(make_diagnostic(code, std::move(message), chain.notebook_path,
                                        at.cell_index, at.line, at.column + 1,
                                        Category::unused));
    };

    for (const UnusedVariable& u : find_unused(table, options.policy)) {
        const ScopeKind kind = table.scopes[static_cast<size_t>(u.scope_id)].kind;
        const bool local = kind != ScopeKind::notebook;
        add("U001",
            std::string(local ? "local " : "") + "variable '" + u.name +
                "' is assigned but never used",
            u.defining_location);
    }

    if (options.report_dead_stores || options.report_unused_imports) {
        auto bindings = binding_map(table);

        // Per-binding store and load ordinals (dead-store analysis counts the
        // read half of augmented assignments: it does consume the value).
        std::map<BindingKey, std::vector<const AccessEntry*>> stores;
        std::map<BindingKey, std::vector<int>> reads;
        std::set<BindingKey> has_counting_load;
        for (const AccessEntry& entry : table.entries) {
            if (entry.ctx == AccessCtx::del_) continue;
            const int scope = resolve_binding_scope(table, entry.name, entry.scope_id);
            BindingKey key{scope, entry.name};
            if (bindings.count(key) == 0) continue;
            if (entry.ctx == AccessCtx::store) {
                stores[key].push_back(&entry);
            } else {
                if (entry.ordinal >= bindings[key].first_store_ordinal) {
                    reads[key].push_back(entry.ordinal);
                    if (!entry.aug_target_load) has_counting_load.insert(key);
                }
            }
        }

        if (options.report_dead_stores) {
            for (const auto& [key, binding_stores] : stores) {
                // Only bindings that are genuinely used somewhere: fully
                // unused bindings are the U001/U003 story.
                if (has_counting_load.count(key) == 0) continue;
                const auto& read_ordinals = reads[key];
                for (size_t i = 0; i < binding_stores.size(); ++i) {
                    const int begin = binding_stores[i]->ordinal;
                    const int end = i + 1 < binding_stores.size()
                                        ? binding_stores[i + 1]->ordinal
                                        : std::numeric_limits<int>::max();
                    const bool read = std::any_of(
                        read_ordinals.begin(), read_ordinals.end(),
                        [&](int ord) { return ord > begin && ord < end; });
                    if (!read)
                        add("U002",
                            "dead store: this value of '" + key.name + "' is never used",
                            binding_stores[i]->location);
                }
            }
        }

        if (options.report_unused_imports && options.policy.exclude_imports) {
            for (const auto& [key, info] : bindings) {
                if (!info.import_origin || has_counting_load.count(key) > 0) continue;
                if (options.policy.exclude_underscore && !info.name.empty() &&
                    info.name[0] == '_')
                    continue;
                add("U003", "imported name '" + info.name + "' is never used",
                    info.first_store);
            }
        }
    }

    sort_diagnostics(diags);
    return diags;
}

std::pair<int, int> unused_summary(const std::vector<std::vector<UnusedVariable>>& per_notebook) {
    int notebooks = 0;
    int total = 0;
    for (const auto& findings : per_notebook) {
        if (!findings.empty()) ++notebooks;
        total += static_cast<int>(findings.size());
    }
    return {notebooks, total};
}

}  // namespace nblint::dataflow
