#include "support/unused_oracle.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <tuple>

#include "nblint/ast.hpp"
#include "nblint/text.hpp"

namespace nblint::testsupport {
namespace {

using namespace nblint::ast;

enum class EvKind { store, param, import_store, del, load, aug_load };

struct Context {
    enum class Kind { module, function, cls, comprehension, lambda };
    Kind kind = Kind::module;
    const Context* parent = nullptr;
    std::set<std::string> declared_global;
    std::set<std::string> declared_nonlocal;
};

struct Event {
    std::string name;
    EvKind kind = EvKind::load;
    const Context* ctx = nullptr;
    int seq = 0;
    int cell = 0;
    int line = 1;
    int col = 0;
};

struct Walk {
    std::vector<std::unique_ptr<Context>> owned;
    std::vector<Event> events;
    std::set<std::string> exported;
    Context* module_ctx = nullptr;
    Context* at = nullptr;
    int cell = 0;

    Context* make(Context::Kind kind) {
        auto ctx = std::make_unique<Context>();
        ctx->kind = kind;
        ctx->parent = at;
        owned.push_back(std::move(ctx));
        return owned.back().get();
    }

    void record(const std::u32string& name, EvKind kind, const Span& span,
                Context* where = nullptr) {
        Event e;
        e.name = text::encode_utf8(name);
        e.kind = kind;
        e.ctx = where != nullptr ? where : at;
        e.seq = static_cast<int>(events.size());
        e.cell = cell;
        e.line = span.first_line;
        e.col = span.first_col;
        events.push_back(std::move(e));
    }

    // Walrus targets escape comprehension contexts.
    Context* walrus_home() {
        Context* c = at;
        while (c->kind == Context::Kind::comprehension) c = const_cast<Context*>(c->parent);
        return c;
    }

    void stmts(const std::vector<StmtPtr>& body) {
        for (const auto& s : body) stmt(*s);
    }

    void stmt(const Stmt& s);
    void expr(const Expr& e);

    void outer_args(const Arguments& a) {
        for (const auto& d : a.defaults) expr(*d);
        for (const auto& d : a.kw_defaults)
            if (d) expr(*d);
        auto ann = [&](const Arg& arg) {
            if (arg.annotation) expr(*arg.annotation);
        };
        for (const auto& arg : a.posonly) ann(arg);
        for (const auto& arg : a.args) ann(arg);
        if (a.vararg) ann(*a.vararg);
        for (const auto& arg : a.kwonly) ann(arg);
        if (a.kwarg) ann(*a.kwarg);
    }

    void param_stores(const Arguments& a) {
        auto p = [&](const Arg& arg) { record(arg.name, EvKind::param, arg.span); };
        for (const auto& arg : a.posonly) p(arg);
        for (const auto& arg : a.args) p(arg);
        if (a.vararg) p(*a.vararg);
        for (const auto& arg : a.kwonly) p(arg);
        if (a.kwarg) p(*a.kwarg);
    }

    void comprehension(const std::vector<Comprehension>& gens,
                       const std::function<void()>& element) {
        expr(*gens.front().iter);
        Context* inner = make(Context::Kind::comprehension);
        Context* saved = at;
        at = inner;
        for (size_t i = 0; i < gens.size(); ++i) {
            if (i > 0) expr(*gens[i].iter);
            expr(*gens[i].target);
            for (const auto& cond : gens[i].ifs) expr(*cond);
        }
        element();
        at = saved;
    }

    void export_list(const Expr& value) {
        const std::vector<ExprPtr>* elts = nullptr;
        if (const auto* l = value.as<ListExpr>()) elts = &l->elts;
        if (const auto* t = value.as<TupleExpr>()) elts = &t->elts;
        if (const auto* st = value.as<SetExpr>()) elts = &st->elts;
        if (elts == nullptr) return;
        for (const auto& e : *elts) {
            const auto* c = e->as<ConstantExpr>();
            if (c && c->kind == ConstantKind::string)
                exported.insert(text::encode_utf8(c->value));
        }
    }
};

void Walk::stmt(const Stmt& s) {
    if (const auto* f = s.as<FunctionDefStmt>()) {
        for (const auto& d : f->decorators) expr(*d);
        outer_args(f->args);
        if (f->returns) expr(*f->returns);
        record(f->name, EvKind::store, s.span);
        Context* inner = make(Context::Kind::function);
        Context* saved = at;
        at = inner;
        param_stores(f->args);
        stmts(f->body);
        at = saved;
    } else if (const auto* c = s.as<ClassDefStmt>()) {
        for (const auto& d : c->decorators) expr(*d);
        for (const auto& b : c->bases) expr(*b);
        for (const auto& kw : c->keywords) expr(*kw.value);
        Context* inner = make(Context::Kind::cls);
        Context* saved = at;
        at = inner;
        stmts(c->body);
        at = saved;
        record(c->name, EvKind::store, s.span);
    } else if (const auto* r = s.as<ReturnStmt>()) {
        if (r->value) expr(*r->value);
    } else if (const auto* d = s.as<DeleteStmt>()) {
        for (const auto& t : d->targets) expr(*t);
    } else if (const auto* a = s.as<AssignStmt>()) {
        expr(*a->value);
        for (const auto& t : a->targets) expr(*t);
        if (at == module_ctx) {
            for (const auto& t : a->targets) {
                const auto* name = t->as<NameExpr>();
                if (name && name->id == U"__all__") export_list(*a->value);
            }
        }
    } else if (const auto* aug = s.as<AugAssignStmt>()) {
        if (const auto* name = aug->target->as<NameExpr>()) {
            record(name->id, EvKind::aug_load, aug->target->span);
            expr(*aug->value);
            record(name->id, EvKind::store, aug->target->span);
            if (at == module_ctx && name->id == U"__all__") export_list(*aug->value);
        } else {
            expr(*aug->target);
            expr(*aug->value);
        }
    } else if (const auto* ann = s.as<AnnAssignStmt>()) {
        if (ann->value) expr(*ann->value);
        expr(*ann->target);
        expr(*ann->annotation);
    } else if (const auto* f = s.as<ForStmt>()) {
        expr(*f->iter);
        expr(*f->target);
        stmts(f->body);
        stmts(f->orelse);
    } else if (const auto* w = s.as<WhileStmt>()) {
        expr(*w->test);
        stmts(w->body);
        stmts(w->orelse);
    } else if (const auto* i = s.as<IfStmt>()) {
        expr(*i->test);
        stmts(i->body);
        stmts(i->orelse);
    } else if (const auto* w = s.as<WithStmt>()) {
        for (const auto& item : w->items) {
            expr(*item.context);
            if (item.target) expr(*item.target);
        }
        stmts(w->body);
    } else if (const auto* r = s.as<RaiseStmt>()) {
        if (r->exc) expr(*r->exc);
        if (r->cause) expr(*r->cause);
    } else if (const auto* t = s.as<TryStmt>()) {
        stmts(t->body);
        for (const auto& h : t->handlers) {
            if (h.type) expr(*h.type);
            if (h.name) record(*h.name, EvKind::store, h.span);
            stmts(h.body);
        }
        stmts(t->orelse);
        stmts(t->finalbody);
    } else if (const auto* a = s.as<AssertStmt>()) {
        expr(*a->test);
        if (a->msg) expr(*a->msg);
    } else if (const auto* imp = s.as<ImportStmt>()) {
        for (const auto& alias : imp->names) {
            std::u32string bound = alias.asname ? *alias.asname : alias.name;
            if (!alias.asname) {
                auto dot = bound.find(U'.');
                if (dot != std::u32string::npos) bound.resize(dot);
            }
            record(bound, EvKind::import_store, alias.span);
        }
    } else if (const auto* imp = s.as<ImportFromStmt>()) {
        for (const auto& alias : imp->names) {
            if (alias.name == U"*") continue;  // binds nothing nameable
            record(alias.asname ? *alias.asname : alias.name, EvKind::import_store, alias.span);
        }
    } else if (const auto* g = s.as<GlobalStmt>()) {
        for (const auto& n : g->names) at->declared_global.insert(text::encode_utf8(n));
    } else if (const auto* n = s.as<NonlocalStmt>()) {
        for (const auto& name : n->names) at->declared_nonlocal.insert(text::encode_utf8(name));
    } else if (const auto* e = s.as<ExprStmt>()) {
        expr(*e->value);
    }
    // pass/break/continue: nothing
}

void Walk::expr(const Expr& e) {
    if (const auto* b = e.as<BoolOpExpr>()) {
        for (const auto& v : b->values) expr(*v);
    } else if (const auto* n = e.as<NamedExprExpr>()) {
        expr(*n->value);
        if (const auto* name = n->target->as<NameExpr>())
            record(name->id, EvKind::store, n->target->span, walrus_home());
    } else if (const auto* b = e.as<BinOpExpr>()) {
        expr(*b->left);
        expr(*b->right);
    } else if (const auto* u = e.as<UnaryOpExpr>()) {
        expr(*u->operand);
    } else if (const auto* l = e.as<LambdaExpr>()) {
        outer_args(l->args);
        Context* inner = make(Context::Kind::lambda);
        Context* saved = at;
        at = inner;
        param_stores(l->args);
        expr(*l->body);
        at = saved;
    } else if (const auto* i = e.as<IfExpExpr>()) {
        expr(*i->test);
        expr(*i->body);
        expr(*i->orelse);
    } else if (const auto* d = e.as<DictExpr>()) {
        for (size_t i = 0; i < d->values.size(); ++i) {
            if (d->keys[i]) expr(*d->keys[i]);
            expr(*d->values[i]);
        }
    } else if (const auto* s = e.as<SetExpr>()) {
        for (const auto& el : s->elts) expr(*el);
    } else if (const auto* c = e.as<ListCompExpr>()) {
        comprehension(c->generators, [&] { expr(*c->elt); });
    } else if (const auto* c = e.as<SetCompExpr>()) {
        comprehension(c->generators, [&] { expr(*c->elt); });
    } else if (const auto* c = e.as<DictCompExpr>()) {
        comprehension(c->generators, [&] {
            expr(*c->key);
            expr(*c->value);
        });
    } else if (const auto* c = e.as<GeneratorExpExpr>()) {
        comprehension(c->generators, [&] { expr(*c->elt); });
    } else if (const auto* a = e.as<AwaitExpr>()) {
        expr(*a->value);
    } else if (const auto* y = e.as<YieldExpr>()) {
        if (y->value) expr(*y->value);
    } else if (const auto* y = e.as<YieldFromExpr>()) {
        expr(*y->value);
    } else if (const auto* c = e.as<CompareExpr>()) {
        expr(*c->left);
        for (const auto& cmp : c->comparators) expr(*cmp);
    } else if (const auto* c = e.as<CallExpr>()) {
        expr(*c->func);
        for (const auto& a : c->args) expr(*a);
        for (const auto& kw : c->keywords) expr(*kw.value);
    } else if (const auto* f = e.as<FormattedValueExpr>()) {
        expr(*f->value);
        if (f->format_spec) expr(*f->format_spec);
    } else if (const auto* j = e.as<JoinedStrExpr>()) {
        for (const auto& v : j->values) expr(*v);
    } else if (e.as<ConstantExpr>() != nullptr) {
        // literals bind nothing
    } else if (const auto* a = e.as<AttributeExpr>()) {
        expr(*a->value);
    } else if (const auto* s = e.as<SubscriptExpr>()) {
        expr(*s->value);
        expr(*s->slice);
    } else if (const auto* st = e.as<StarredExpr>()) {
        expr(*st->value);
    } else if (const auto* n = e.as<NameExpr>()) {
        switch (n->ctx) {
            case Ctx::load: record(n->id, EvKind::load, e.span); break;
            case Ctx::store: record(n->id, EvKind::store, e.span); break;
            case Ctx::del_: record(n->id, EvKind::del, e.span); break;
        }
    } else if (const auto* l = e.as<ListExpr>()) {
        for (const auto& el : l->elts) expr(*el);
    } else if (const auto* t = e.as<TupleExpr>()) {
        for (const auto& el : t->elts) expr(*el);
    } else if (const auto* sl = e.as<SliceExpr>()) {
        if (sl->lower) expr(*sl->lower);
        if (sl->upper) expr(*sl->upper);
        if (sl->step) expr(*sl->step);
    }
}

bool binds_name(EvKind kind) {
    return kind == EvKind::store || kind == EvKind::param || kind == EvKind::import_store ||
           kind == EvKind::del;
}

// Locality re-derived by scanning the full event list every time.
bool is_local(const Walk& walk, const Context* ctx, const std::string& name) {
    if (ctx->declared_global.count(name) > 0 || ctx->declared_nonlocal.count(name) > 0)
        return false;
    for (const Event& e : walk.events)
        if (e.ctx == ctx && e.name == name && binds_name(e.kind)) return true;
    return false;
}

const Context* resolve(const Walk& walk, const Context* ctx, const std::string& name) {
    if (ctx->declared_global.count(name) > 0) return walk.module_ctx;
    if (ctx->declared_nonlocal.count(name) > 0) {
        for (const Context* p = ctx->parent; p != nullptr; p = p->parent) {
            const bool function_like = p->kind == Context::Kind::function ||
                                       p->kind == Context::Kind::lambda ||
                                       p->kind == Context::Kind::comprehension;
            if (function_like && p->declared_nonlocal.count(name) == 0 &&
                is_local(walk, p, name))
                return p;
        }
        return walk.module_ctx;
    }
    if (is_local(walk, ctx, name)) return ctx;
    for (const Context* p = ctx->parent; p != nullptr; p = p->parent)
        if (p->kind != Context::Kind::cls && is_local(walk, p, name)) return p;
    return walk.module_ctx;
}

}  // namespace

std::vector<OracleFinding> oracle_unused(const std::vector<dataflow::CellAst>& cells,
                                         const dataflow::UnusedPolicy& policy) {
    Walk walk;
    walk.module_ctx = walk.make(Context::Kind::module);
    walk.at = walk.module_ctx;
    for (const auto& cell : cells) {
        walk.cell = cell.cell_index;
        if (cell.module == nullptr) continue;
        for (const auto& stmt : cell.module->body) walk.stmt(*stmt);
    }

    // Group stores by resolved binding.
    struct Group {
        const Event* first = nullptr;
        bool any_param = false;
        bool any_import = false;
    };
    std::map<std::pair<const Context*, std::string>, Group> groups;
    for (const Event& e : walk.events) {
        if (e.kind != EvKind::store && e.kind != EvKind::param && e.kind != EvKind::import_store)
            continue;
        const Context* home = resolve(walk, e.ctx, e.name);
        Group& g = groups[{home, e.name}];
        if (g.first == nullptr) g.first = &e;
        g.any_param = g.any_param || e.kind == EvKind::param;
        g.any_import = g.any_import || e.kind == EvKind::import_store;
    }

    std::vector<OracleFinding> out;
    for (const auto& [key, group] : groups) {
        const auto& [home, name] = key;

        if (policy.exclude_underscore && !name.empty() && name[0] == '_') continue;
        if (policy.exclude_parameters && group.any_param) continue;
        if (policy.exclude_imports && group.any_import) continue;
        if (policy.exclude_exported && home == walk.module_ctx && walk.exported.count(name) > 0)
            continue;

        // Exhaustive use search: any plain load, anywhere at or after the
        // first store, resolving to this binding.
        bool used = false;
        for (const Event& e : walk.events) {
            if (e.kind != EvKind::load || e.name != name) continue;
            if (e.seq < group.first->seq) continue;
            if (resolve(walk, e.ctx, e.name) == home) {
                used = true;
                break;
            }
        }
        if (used) continue;

        OracleFinding f;
        f.name = name;
        f.cell_index = group.first->cell;
        f.line = group.first->line;
        f.column = group.first->col;
        out.push_back(std::move(f));
    }

    std::sort(out.begin(), out.end(), [](const OracleFinding& a, const OracleFinding& b) {
        return std::tie(a.cell_index, a.line, a.column, a.name) <
               std::tie(b.cell_index, b.line, b.column, b.name);
    });
    return out;
}

}  // namespace nblint::testsupport
