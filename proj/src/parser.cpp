#include "nblint/ast.hpp"

#include <algorithm>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "nblint/text.hpp"
#include "nblint/tokenize.hpp"

namespace nblint::ast {

const char* to_string(Ctx c) {
    switch (c) {
        case Ctx::load: return "Load";
        case Ctx::store: return "Store";
        case Ctx::del_: return "Del";
    }
    return "Load";
}

namespace {

using py::Token;
using py::TokenKind;

bool is_keyword_text(const std::u32string& s) {
    static const std::vector<std::u32string> kw = {
        U"False",  U"None",   U"True",   U"and",    U"as",     U"assert", U"async",
        U"await",  U"break",  U"class",  U"continue", U"def",  U"del",    U"elif",
        U"else",   U"except", U"finally", U"for",   U"from",   U"global", U"if",
        U"import", U"in",     U"is",     U"lambda", U"nonlocal", U"not",  U"or",
        U"pass",   U"raise",  U"return", U"try",    U"while",  U"with",   U"yield"};
    return std::binary_search(kw.begin(), kw.end(), s);
}

std::string narrow(const std::u32string& s) { return text::encode_utf8(s); }

Span token_span(const Token& t) {
    return Span{t.start.line, t.start.col, t.end.line, t.end.col};
}

Span merge(const Span& a, const Span& b) {
    return Span{a.first_line, a.first_col, b.last_line, b.last_col};
}

ExprPtr make_expr(Span span, ExprNode node) {
    auto e = std::make_unique<Expr>();
    e->span = span;
    e->node = std::move(node);
    return e;
}

StmtPtr make_stmt(Span span, StmtNode node) {
    auto s = std::make_unique<Stmt>();
    s->span = span;
    s->node = std::move(node);
    return s;
}

// ---------------------------------------------------------------------------
// String literal helpers.

struct StringInfo {
    bool is_raw = false;
    bool is_bytes = false;
    bool is_fstring = false;
    size_t body_begin = 0;  // index into token text
    size_t body_end = 0;
};

StringInfo classify_string(const std::u32string& tok, int err_line, int err_col) {
    StringInfo info;
    size_t i = 0;
    while (i < tok.size() && tok[i] != U'\'' && tok[i] != U'"') {
        char32_t c = tok[i];
        if (c == U'r' || c == U'R') {
            info.is_raw = true;
        } else if (c == U'b' || c == U'B') {
            info.is_bytes = true;
        } else if (c == U'f' || c == U'F') {
            info.is_fstring = true;
        } else if (c == U'u' || c == U'U') {
            // plain unicode prefix
        } else {
            throw ParseError("malformed string prefix", err_line, err_col);
        }
        ++i;
    }
    if (i >= tok.size()) throw ParseError("malformed string literal", err_line, err_col);
    const char32_t quote = tok[i];
    size_t quote_len = 1;
    if (i + 2 < tok.size() && tok[i + 1] == quote && tok[i + 2] == quote) quote_len = 3;
    info.body_begin = i + quote_len;
    info.body_end = tok.size() - quote_len;
    return info;
}

int hex_value(char32_t c) {
    if (c >= U'0' && c <= U'9') return static_cast<int>(c - U'0');
    if (c >= U'a' && c <= U'f') return static_cast<int>(c - U'a' + 10);
    if (c >= U'A' && c <= U'F') return static_cast<int>(c - U'A' + 10);
    return -1;
}

// Resolve backslash escapes the way text-literal values do. Unknown escapes
// keep the backslash. Only used where some analysis consumes the value
// (e.g. names listed in __all__), so esoteric escapes may stay literal.
std::u32string cook_escapes(std::u32string_view body) {
    std::u32string out;
    out.reserve(body.size());
    size_t i = 0;
    while (i < body.size()) {
        char32_t c = body[i];
        if (c != U'\\' || i + 1 >= body.size()) {
            out.push_back(c);
            ++i;
            continue;
        }
        char32_t e = body[i + 1];
        i += 2;
        switch (e) {
            case U'\n': break;  // line continuation inside the literal
            case U'\\': out.push_back(U'\\'); break;
            case U'\'': out.push_back(U'\''); break;
            case U'"': out.push_back(U'"'); break;
            case U'a': out.push_back(U'\a'); break;
            case U'b': out.push_back(U'\b'); break;
            case U'f': out.push_back(U'\f'); break;
            case U'n': out.push_back(U'\n'); break;
            case U'r': out.push_back(U'\r'); break;
            case U't': out.push_back(U'\t'); break;
            case U'v': out.push_back(U'\v'); break;
            case U'x': {
                int value = 0, digits = 0;
                while (digits < 2 && i < body.size() && hex_value(body[i]) >= 0) {
                    value = value * 16 + hex_value(body[i]);
                    ++i;
                    ++digits;
                }
                if (digits == 2) {
                    out.push_back(static_cast<char32_t>(value));
                } else {
                    out += U"\\x";  // malformed: keep literal
                }
                break;
            }
            case U'u':
            case U'U': {
                const int want = e == U'u' ? 4 : 8;
                long long value = 0;
                int digits = 0;
                size_t save = i;
                while (digits < want && i < body.size() && hex_value(body[i]) >= 0) {
                    value = value * 16 + hex_value(body[i]);
                    ++i;
                    ++digits;
                }
                if (digits == want && value <= 0x10FFFF) {
                    out.push_back(static_cast<char32_t>(value));
                } else {
                    i = save;
                    out.push_back(U'\\');
                    out.push_back(e);
                }
                break;
            }
            default:
                if (e >= U'0' && e <= U'7') {
                    int value = static_cast<int>(e - U'0');
                    int digits = 1;
                    while (digits < 3 && i < body.size() && body[i] >= U'0' && body[i] <= U'7') {
                        value = value * 8 + static_cast<int>(body[i] - U'0');
                        ++i;
                        ++digits;
                    }
                    out.push_back(static_cast<char32_t>(value));
                } else {
                    out.push_back(U'\\');
                    out.push_back(e);
                }
                break;
        }
    }
    return out;
}

ConstantKind number_kind(const std::u32string& raw) {
    std::u32string low;
    low.reserve(raw.size());
    for (char32_t c : raw) low.push_back(c >= U'A' && c <= U'Z' ? c + 32 : c);
    if (!low.empty() && low.back() == U'j') return ConstantKind::complex_num;
    if (low.size() > 1 && low[0] == U'0' &&
        (low[1] == U'x' || low[1] == U'o' || low[1] == U'b'))
        return ConstantKind::integer;
    if (low.find(U'.') != std::u32string::npos || low.find(U'e') != std::u32string::npos)
        return ConstantKind::floating;
    return ConstantKind::integer;
}

// ---------------------------------------------------------------------------

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) {
        tokens_.reserve(tokens.size());
        for (auto& t : tokens) {
            if (t.kind == TokenKind::comment || t.kind == TokenKind::nl) continue;
            tokens_.push_back(std::move(t));
        }
    }

    Module parse_file() {
        Module mod;
        while (!at_end()) {
            mod.body.push_back(parse_statement());
            drain_pending(mod.body);
        }
        return mod;
    }

    ExprPtr parse_single_expression() {
        ExprPtr e = parse_testlist_star_expr(true);
        if (peek().kind == TokenKind::newline) advance();
        if (!at_end()) fail("unexpected token after expression");
        return e;
    }

private:
    std::vector<Token> tokens_;
    size_t pos_ = 0;

    // -- token plumbing ------------------------------------------------------

    const Token& peek(size_t ahead = 0) const {
        const size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
        return tokens_[i];
    }

    const Token& advance() { return tokens_[std::min(pos_++, tokens_.size() - 1)]; }

    const Token& previous() const { return tokens_[pos_ == 0 ? 0 : pos_ - 1]; }

    bool at_end() const { return peek().kind == TokenKind::end; }

    bool at_op(std::u32string_view s) const {
        return peek().kind == TokenKind::op && peek().text == s;
    }

    bool at_keyword(std::u32string_view s) const {
        return peek().kind == TokenKind::name && peek().text == s;
    }

    bool at_name() const {
        return peek().kind == TokenKind::name && !is_keyword_text(peek().text);
    }

    bool eat_op(std::u32string_view s) {
        if (!at_op(s)) return false;
        advance();
        return true;
    }

    bool eat_keyword(std::u32string_view s) {
        if (!at_keyword(s)) return false;
        advance();
        return true;
    }

    void expect_op(std::u32string_view s, const char* context) {
        if (!eat_op(s)) fail(std::string("expected '") + narrow(std::u32string(s)) + "' " + context);
    }

    void expect_newline() {
        if (peek().kind == TokenKind::newline) {
            advance();
            return;
        }
        if (at_end()) return;
        fail("expected end of statement");
    }

    std::u32string expect_name(const char* context) {
        if (!at_name()) fail(std::string("expected a name ") + context);
        return advance().text;
    }

    [[noreturn]] void fail(const std::string& message) const {
        const Token& t = peek();
        throw ParseError(message, t.start.line, t.start.col);
    }

    [[noreturn]] void fail_at(const std::string& message, const Span& span) const {
        throw ParseError(message, span.first_line, span.first_col);
    }

    Span end_span() const { return token_span(previous()); }

    // -- binding context -----------------------------------------------------

    void set_ctx(Expr& e, Ctx ctx, const char* action) {
        if (auto* n = e.as<NameExpr>()) {
            n->ctx = ctx;
        } else if (auto* a = e.as<AttributeExpr>()) {
            a->ctx = ctx;
        } else if (auto* s = e.as<SubscriptExpr>()) {
            s->ctx = ctx;
        } else if (auto* st = e.as<StarredExpr>()) {
            if (ctx == Ctx::del_) fail_at("cannot delete starred expression", e.span);
            st->ctx = ctx;
            set_ctx(*st->value, ctx, action);
        } else if (auto* l = e.as<ListExpr>()) {
            l->ctx = ctx;
            for (auto& elt : l->elts) set_ctx(*elt, ctx, action);
        } else if (auto* t = e.as<TupleExpr>()) {
            t->ctx = ctx;
            for (auto& elt : t->elts) set_ctx(*elt, ctx, action);
        } else {
            fail_at(std::string("cannot ") + action + " this expression", e.span);
        }
    }

    // -- statements ----------------------------------------------------------

    StmtPtr parse_statement() {
        const Token& t = peek();
        if (t.kind == TokenKind::name) {
            const std::u32string& kw = t.text;
            if (kw == U"if") return parse_if();
            if (kw == U"while") return parse_while();
            if (kw == U"for") return parse_for(false, t);
            if (kw == U"try") return parse_try();
            if (kw == U"with") return parse_with(false, t);
            if (kw == U"def") return parse_function(false, t, {});
            if (kw == U"class") return parse_class(t, {});
            if (kw == U"async") return parse_async();
            return parse_simple_statements();
        }
        if (t.kind == TokenKind::op && t.text == U"@") return parse_decorated();
        if (t.kind == TokenKind::indent) fail("unexpected indent");
        if (t.kind == TokenKind::error) fail("invalid character in statement");
        return parse_simple_statements();
    }

    // One physical statement line: simple statements joined by ';'. A single
    // statement comes back as itself; several become consecutive module/block
    // entries, so the caller collects into the enclosing body.
    StmtPtr parse_simple_statements() {
        StmtPtr first = parse_simple_statement();
        while (eat_op(U";")) {
            if (peek().kind == TokenKind::newline || at_end()) break;
            pending_.push_back(parse_simple_statement());
        }
        expect_newline();
        return first;
    }

    std::vector<StmtPtr> pending_;  // extra ';'-joined statements

    void drain_pending(std::vector<StmtPtr>& body) {
        for (auto& s : pending_) body.push_back(std::move(s));
        pending_.clear();
    }

    StmtPtr parse_simple_statement() {
        const Token& t = peek();
        if (t.kind == TokenKind::name) {
            const std::u32string& kw = t.text;
            if (kw == U"pass") {
                advance();
                return make_stmt(token_span(t), PassStmt{});
            }
            if (kw == U"break") {
                advance();
                return make_stmt(token_span(t), BreakStmt{});
            }
            if (kw == U"continue") {
                advance();
                return make_stmt(token_span(t), ContinueStmt{});
            }
            if (kw == U"return") return parse_return();
            if (kw == U"del") return parse_del();
            if (kw == U"raise") return parse_raise();
            if (kw == U"import") return parse_import();
            if (kw == U"from") return parse_import_from();
            if (kw == U"global" || kw == U"nonlocal") return parse_scope_decl();
            if (kw == U"assert") return parse_assert();
            if (kw == U"yield") {
                ExprPtr value = parse_yield_expr();
                Span span = value->span;
                return make_stmt(span, ExprStmt{std::move(value)});
            }
        }
        return parse_expr_statement();
    }

    StmtPtr parse_return() {
        const Token& kw = advance();
        ExprPtr value;
        if (!at_statement_end()) value = parse_testlist_star_expr(true);
        Span span = value ? merge(token_span(kw), value->span) : token_span(kw);
        return make_stmt(span, ReturnStmt{std::move(value)});
    }

    StmtPtr parse_del() {
        const Token& kw = advance();
        std::vector<ExprPtr> targets;
        targets.push_back(parse_expr_level());
        while (eat_op(U",")) {
            if (at_statement_end()) break;
            targets.push_back(parse_expr_level());
        }
        for (auto& t : targets) set_ctx(*t, Ctx::del_, "delete");
        Span span = merge(token_span(kw), targets.back()->span);
        return make_stmt(span, DeleteStmt{std::move(targets)});
    }

    StmtPtr parse_raise() {
        const Token& kw = advance();
        ExprPtr exc, cause;
        if (!at_statement_end()) {
            exc = parse_test();
            if (eat_keyword(U"from")) cause = parse_test();
        }
        Span span = token_span(kw);
        if (cause)
            span = merge(span, cause->span);
        else if (exc)
            span = merge(span, exc->span);
        return make_stmt(span, RaiseStmt{std::move(exc), std::move(cause)});
    }

    StmtPtr parse_assert() {
        const Token& kw = advance();
        ExprPtr test = parse_test();
        ExprPtr msg;
        if (eat_op(U",")) msg = parse_test();
        Span span = merge(token_span(kw), msg ? msg->span : test->span);
        return make_stmt(span, AssertStmt{std::move(test), std::move(msg)});
    }

    StmtPtr parse_scope_decl() {
        const Token& kw = advance();
        std::vector<std::u32string> names;
        names.push_back(expect_name("after scope declaration"));
        while (eat_op(U",")) names.push_back(expect_name("in scope declaration"));
        Span span = merge(token_span(kw), end_span());
        if (kw.text == U"global") return make_stmt(span, GlobalStmt{std::move(names)});
        return make_stmt(span, NonlocalStmt{std::move(names)});
    }

    std::u32string parse_dotted_name() {
        std::u32string name = expect_name("in import");
        while (at_op(U".")) {
            advance();
            name += U'.';
            name += expect_name("after '.' in import");
        }
        return name;
    }

    StmtPtr parse_import() {
        const Token& kw = advance();
        std::vector<Alias> names;
        do {
            const Token& start = peek();
            Alias alias;
            alias.name = parse_dotted_name();
            if (eat_keyword(U"as")) alias.asname = expect_name("after 'as'");
            alias.span = merge(token_span(start), end_span());
            names.push_back(std::move(alias));
        } while (eat_op(U","));
        Span span = merge(token_span(kw), end_span());
        return make_stmt(span, ImportStmt{std::move(names)});
    }

    Alias parse_import_from_alias() {
        const Token& start = peek();
        Alias alias;
        alias.name = expect_name("in import list");
        if (eat_keyword(U"as")) alias.asname = expect_name("after 'as'");
        alias.span = merge(token_span(start), end_span());
        return alias;
    }

    StmtPtr parse_import_from() {
        const Token& kw = advance();
        int level = 0;
        while (true) {
            if (at_op(U".")) {
                advance();
                level += 1;
            } else if (at_op(U"...")) {
                advance();
                level += 3;
            } else {
                break;
            }
        }
        std::optional<std::u32string> module;
        if (!at_keyword(U"import")) module = parse_dotted_name();
        if (!module && level == 0) fail("expected module name after 'from'");
        if (!eat_keyword(U"import")) fail("expected 'import' in from-import");
        std::vector<Alias> names;
        if (at_op(U"*")) {
            const Token& star = advance();
            names.push_back(Alias{U"*", std::nullopt, token_span(star)});
        } else if (eat_op(U"(")) {
            do {
                if (at_op(U")")) break;  // trailing comma
                names.push_back(parse_import_from_alias());
            } while (eat_op(U","));
            expect_op(U")", "to close import list");
        } else {
            do {
                names.push_back(parse_import_from_alias());
            } while (eat_op(U","));
        }
        Span span = merge(token_span(kw), end_span());
        return make_stmt(span, ImportFromStmt{std::move(module), std::move(names), level});
    }

    bool at_statement_end() const {
        return peek().kind == TokenKind::newline || at_op(U";") || at_end();
    }

    bool at_aug_op() const {
        if (peek().kind != TokenKind::op) return false;
        static const std::vector<std::u32string> ops = {
            U"%=", U"&=", U"**=", U"*=",  U"+=",  U"-=", U"//=",
            U"/=", U"<<=", U">>=", U"@=", U"^=",  U"|="};
        return std::find(ops.begin(), ops.end(), peek().text) != ops.end();
    }

    BinaryOp aug_to_binop(const std::u32string& op) const {
        if (op == U"+=") return BinaryOp::add;
        if (op == U"-=") return BinaryOp::sub;
        if (op == U"*=") return BinaryOp::mult;
        if (op == U"@=") return BinaryOp::mat_mult;
        if (op == U"/=") return BinaryOp::div;
        if (op == U"%=") return BinaryOp::mod;
        if (op == U"**=") return BinaryOp::pow;
        if (op == U"<<=") return BinaryOp::lshift;
        if (op == U">>=") return BinaryOp::rshift;
        if (op == U"|=") return BinaryOp::bit_or;
        if (op == U"^=") return BinaryOp::bit_xor;
        return BinaryOp::bit_and;
    }

    StmtPtr parse_expr_statement() {
        const Token& start = peek();
        ExprPtr first = parse_testlist_star_expr(true);

        if (at_op(U":")) {
            advance();
            const bool simple = first->as<NameExpr>() != nullptr &&
                                first->span.first_line == start.start.line &&
                                first->span.first_col == start.start.col;
            if (!first->as<NameExpr>() && !first->as<AttributeExpr>() &&
                !first->as<SubscriptExpr>())
                fail_at("only a single name, attribute, or subscript can be annotated",
                        first->span);
            set_ctx(*first, Ctx::store, "assign to");
            ExprPtr annotation = parse_test();
            ExprPtr value;
            if (eat_op(U"=")) {
                value = at_keyword(U"yield") ? parse_yield_expr()
                                             : parse_testlist_star_expr(true);
            }
            Span span = merge(first->span, value ? value->span : annotation->span);
            return make_stmt(span, AnnAssignStmt{std::move(first), std::move(annotation),
                                                 std::move(value), simple});
        }

        if (at_aug_op()) {
            const std::u32string op = advance().text;
            if (!first->as<NameExpr>() && !first->as<AttributeExpr>() &&
                !first->as<SubscriptExpr>())
                fail_at("illegal target for augmented assignment", first->span);
            set_ctx(*first, Ctx::store, "assign to");
            ExprPtr value =
                at_keyword(U"yield") ? parse_yield_expr() : parse_testlist();
            Span span = merge(first->span, value->span);
            return make_stmt(span,
                             AugAssignStmt{std::move(first), aug_to_binop(op), std::move(value)});
        }

        if (at_op(U"=")) {
            std::vector<ExprPtr> targets;
            ExprPtr value = std::move(first);
            while (eat_op(U"=")) {
                set_ctx(*value, Ctx::store, "assign to");
                targets.push_back(std::move(value));
                value = at_keyword(U"yield") ? parse_yield_expr()
                                             : parse_testlist_star_expr(true);
            }
            Span span = merge(targets.front()->span, value->span);
            return make_stmt(span, AssignStmt{std::move(targets), std::move(value)});
        }

        Span span = first->span;
        return make_stmt(span, ExprStmt{std::move(first)});
    }

    // -- blocks and compound statements ---------------------------------------

    std::vector<StmtPtr> parse_suite() {
        expect_op(U":", "before suite");
        std::vector<StmtPtr> body;
        if (peek().kind == TokenKind::newline) {
            advance();
            if (peek().kind != TokenKind::indent) fail("expected an indented block");
            advance();
            while (peek().kind != TokenKind::dedent && !at_end()) {
                body.push_back(parse_statement());
                drain_pending(body);
            }
            if (peek().kind == TokenKind::dedent) advance();
        } else {
            body.push_back(parse_simple_statement());
            while (eat_op(U";")) {
                if (peek().kind == TokenKind::newline || at_end()) break;
                body.push_back(parse_simple_statement());
            }
            expect_newline();
        }
        if (body.empty()) fail("expected an indented block");
        return body;
    }

    static Span body_end(const Span& start, const std::vector<StmtPtr>& body) {
        return body.empty() ? start : merge(start, body.back()->span);
    }

    StmtPtr parse_if() { return parse_if_branch(advance()); }

    StmtPtr parse_if_branch(const Token& kw) {
        ExprPtr test = parse_namedexpr_test();
        std::vector<StmtPtr> body = parse_suite();
        std::vector<StmtPtr> orelse;
        Span span = body_end(token_span(kw), body);
        if (at_keyword(U"elif")) {
            const Token& elif_kw = advance();
            orelse.push_back(parse_if_branch(elif_kw));
            span = merge(span, orelse.back()->span);
        } else if (eat_keyword(U"else")) {
            orelse = parse_suite();
            span = body_end(span, orelse);
        }
        return make_stmt(span, IfStmt{std::move(test), std::move(body), std::move(orelse)});
    }

    StmtPtr parse_while() {
        const Token& kw = advance();
        ExprPtr test = parse_namedexpr_test();
        std::vector<StmtPtr> body = parse_suite();
        std::vector<StmtPtr> orelse;
        Span span = body_end(token_span(kw), body);
        if (eat_keyword(U"else")) {
            orelse = parse_suite();
            span = body_end(span, orelse);
        }
        return make_stmt(span, WhileStmt{std::move(test), std::move(body), std::move(orelse)});
    }

    StmtPtr parse_for(bool is_async, const Token& first_kw) {
        if (!eat_keyword(U"for")) fail("expected 'for'");
        ExprPtr target = parse_target_list(U"in");
        if (!eat_keyword(U"in")) fail("expected 'in' in for statement");
        ExprPtr iter = parse_testlist();
        std::vector<StmtPtr> body = parse_suite();
        std::vector<StmtPtr> orelse;
        Span span = body_end(token_span(first_kw), body);
        if (eat_keyword(U"else")) {
            orelse = parse_suite();
            span = body_end(span, orelse);
        }
        return make_stmt(span, ForStmt{std::move(target), std::move(iter), std::move(body),
                                       std::move(orelse), is_async});
    }

    StmtPtr parse_with(bool is_async, const Token& first_kw) {
        if (!eat_keyword(U"with")) fail("expected 'with'");
        std::vector<WithItem> items;
        do {
            WithItem item;
            item.context = parse_test();
            if (eat_keyword(U"as")) {
                item.target = parse_expr_level();
                set_ctx(*item.target, Ctx::store, "assign to");
            }
            items.push_back(std::move(item));
        } while (eat_op(U","));
        std::vector<StmtPtr> body = parse_suite();
        Span span = body_end(token_span(first_kw), body);
        return make_stmt(span, WithStmt{std::move(items), std::move(body), is_async});
    }

    StmtPtr parse_try() {
        const Token& kw = advance();
        std::vector<StmtPtr> body = parse_suite();
        std::vector<ExceptHandler> handlers;
        std::vector<StmtPtr> orelse;
        std::vector<StmtPtr> finalbody;
        bool saw_bare_except = false;
        while (at_keyword(U"except")) {
            const Token& h_kw = advance();
            if (saw_bare_except) fail("default 'except:' must be last");
            ExceptHandler handler;
            if (!at_op(U":")) {
                handler.type = parse_test();
                if (eat_keyword(U"as")) handler.name = expect_name("after 'as'");
            } else {
                saw_bare_except = true;
            }
            handler.body = parse_suite();
            handler.span = body_end(token_span(h_kw), handler.body);
            handlers.push_back(std::move(handler));
        }
        if (!handlers.empty() && eat_keyword(U"else")) orelse = parse_suite();
        if (eat_keyword(U"finally")) finalbody = parse_suite();
        if (handlers.empty() && finalbody.empty())
            fail("expected 'except' or 'finally' block");
        Span span = body_end(token_span(kw), body);
        if (!handlers.empty()) span = merge(span, handlers.back().span);
        span = body_end(span, orelse);
        span = body_end(span, finalbody);
        return make_stmt(span, TryStmt{std::move(body), std::move(handlers), std::move(orelse),
                                       std::move(finalbody)});
    }

    StmtPtr parse_async() {
        const Token& async_kw = advance();
        if (at_keyword(U"def")) return parse_function(true, async_kw, {});
        if (at_keyword(U"for")) return parse_for(true, async_kw);
        if (at_keyword(U"with")) return parse_with(true, async_kw);
        fail("expected 'def', 'for', or 'with' after 'async'");
    }

    StmtPtr parse_decorated() {
        std::vector<ExprPtr> decorators;
        while (eat_op(U"@")) {
            decorators.push_back(parse_namedexpr_test());
            expect_newline();
        }
        const Token& t = peek();
        if (at_keyword(U"def")) return parse_function(false, t, std::move(decorators));
        if (at_keyword(U"class")) return parse_class(t, std::move(decorators));
        if (at_keyword(U"async")) {
            advance();
            if (!at_keyword(U"def")) fail("expected 'def' after 'async'");
            return parse_function(true, t, std::move(decorators));
        }
        fail("expected a function or class definition after decorators");
    }

    Arg parse_parameter(bool allow_annotations, const char* where) {
        const Token& start = peek();
        Arg arg;
        arg.name = expect_name(where);
        if (allow_annotations && eat_op(U":")) arg.annotation = parse_test();
        arg.span = merge(token_span(start), end_span());
        return arg;
    }

    Arguments parse_parameters(bool allow_annotations, std::u32string_view terminator) {
        Arguments params;
        bool seen_star = false;
        bool seen_slash = false;
        bool seen_default = false;
        bool need_kwonly = false;
        while (!at_op(terminator)) {
            if (at_op(U"/")) {
                if (seen_slash || seen_star || params.args.empty())
                    fail("invalid position for '/'");
                advance();
                seen_slash = true;
                params.posonly = std::move(params.args);
                params.args.clear();
            } else if (at_op(U"*")) {
                if (seen_star) fail("only one '*' allowed in parameter list");
                advance();
                seen_star = true;
                if (!at_op(U",") && !at_op(terminator)) {
                    params.vararg = parse_parameter(allow_annotations, "for *args");
                } else {
                    need_kwonly = true;
                }
            } else if (at_op(U"**")) {
                advance();
                params.kwarg = parse_parameter(allow_annotations, "for **kwargs");
                if (!at_op(U",") && !at_op(terminator))
                    fail("**kwargs must be the last parameter");
            } else {
                Arg arg = parse_parameter(allow_annotations, "in parameter list");
                ExprPtr deflt;
                if (eat_op(U"=")) deflt = parse_test();
                if (seen_star) {
                    need_kwonly = false;
                    params.kwonly.push_back(std::move(arg));
                    params.kw_defaults.push_back(std::move(deflt));
                } else {
                    if (deflt) {
                        seen_default = true;
                        params.defaults.push_back(std::move(deflt));
                    } else if (seen_default) {
                        fail("parameter without a default follows one with a default");
                    }
                    params.args.push_back(std::move(arg));
                }
            }
            if (!eat_op(U",")) break;
        }
        if (need_kwonly) fail("named parameters must follow bare '*'");
        return params;
    }

    StmtPtr parse_function(bool is_async, const Token& def_or_async,
                           std::vector<ExprPtr> decorators) {
        if (!eat_keyword(U"def")) fail("expected 'def'");
        FunctionDefStmt fn;
        fn.is_async = is_async;
        fn.decorators = std::move(decorators);
        fn.name = expect_name("after 'def'");
        expect_op(U"(", "after function name");
        fn.args = parse_parameters(true, U")");
        expect_op(U")", "to close parameter list");
        if (eat_op(U"->")) fn.returns = parse_test();
        fn.body = parse_suite();
        Span span = body_end(token_span(def_or_async), fn.body);
        return make_stmt(span, std::move(fn));
    }

    StmtPtr parse_class(const Token& class_kw, std::vector<ExprPtr> decorators) {
        if (!eat_keyword(U"class")) fail("expected 'class'");
        ClassDefStmt cls;
        cls.decorators = std::move(decorators);
        cls.name = expect_name("after 'class'");
        if (eat_op(U"(")) {
            if (!at_op(U")")) parse_call_arguments(cls.bases, cls.keywords);
            expect_op(U")", "to close class bases");
        }
        cls.body = parse_suite();
        Span span = body_end(token_span(class_kw), cls.body);
        return make_stmt(span, std::move(cls));
    }

    // -- expressions ----------------------------------------------------------

    ExprPtr parse_yield_expr() {
        const Token& kw = advance();
        if (eat_keyword(U"from")) {
            ExprPtr value = parse_test();
            Span span = merge(token_span(kw), value->span);
            return make_expr(span, YieldFromExpr{std::move(value)});
        }
        ExprPtr value;
        if (!at_statement_end() && !at_op(U")") && !at_op(U"]") && !at_op(U"}") &&
            !at_op(U"=") && !at_op(U",") && !at_op(U":"))
            value = parse_testlist_star_expr(true);
        Span span = value ? merge(token_span(kw), value->span) : token_span(kw);
        return make_expr(span, YieldExpr{std::move(value)});
    }

    // testlist_star_expr: (test|star_expr) (',' ...)* [','] — an unparenthesized
    // tuple when a comma appears.
    ExprPtr parse_testlist_star_expr(bool allow_star) {
        ExprPtr first = allow_star && at_op(U"*") ? parse_star_expr() : parse_test();
        if (!at_op(U",")) return first;
        std::vector<ExprPtr> elts;
        Span span = first->span;
        elts.push_back(std::move(first));
        while (eat_op(U",")) {
            if (at_testlist_end()) break;
            elts.push_back(allow_star && at_op(U"*") ? parse_star_expr() : parse_test());
        }
        span = merge(span, elts.back()->span);
        return make_expr(span, TupleExpr{std::move(elts), Ctx::load});
    }

    // testlist: test (',' test)* [','] — no starred elements.
    ExprPtr parse_testlist() { return parse_testlist_star_expr(false); }

    bool at_testlist_end() const {
        return at_statement_end() || at_op(U"=") || at_op(U")") || at_op(U"]") ||
               at_op(U"}") || at_op(U":") || at_keyword(U"in");
    }

    // Targets of for statements and comprehensions: expr-level elements with
    // star unpacking, turned into a tuple when a comma appears.
    ExprPtr parse_target_list(std::u32string_view stop_kw) {
        ExprPtr first = at_op(U"*") ? parse_star_expr() : parse_expr_level();
        if (!at_op(U",")) {
            set_ctx(*first, Ctx::store, "assign to");
            return first;
        }
        std::vector<ExprPtr> elts;
        Span span = first->span;
        elts.push_back(std::move(first));
        while (eat_op(U",")) {
            if (at_keyword(stop_kw)) break;
            elts.push_back(at_op(U"*") ? parse_star_expr() : parse_expr_level());
        }
        span = merge(span, elts.back()->span);
        auto tuple = make_expr(span, TupleExpr{std::move(elts), Ctx::load});
        set_ctx(*tuple, Ctx::store, "assign to");
        return tuple;
    }

    ExprPtr parse_star_expr() {
        const Token& star = advance();
        ExprPtr value = parse_expr_level();
        Span span = merge(token_span(star), value->span);
        return make_expr(span, StarredExpr{std::move(value), Ctx::load});
    }

    ExprPtr parse_namedexpr_test() {
        ExprPtr e = parse_test();
        if (at_op(U":=")) {
            advance();
            if (!e->as<NameExpr>())
                fail_at("cannot use this expression as an assignment target", e->span);
            set_ctx(*e, Ctx::store, "assign to");
            ExprPtr value = parse_test();
            Span span = merge(e->span, value->span);
            return make_expr(span, NamedExprExpr{std::move(e), std::move(value)});
        }
        return e;
    }

    ExprPtr parse_test() {
        if (at_keyword(U"lambda")) return parse_lambda();
        ExprPtr e = parse_or_test();
        if (at_keyword(U"if")) {
            advance();
            ExprPtr test = parse_or_test();
            if (!eat_keyword(U"else")) fail("expected 'else' in conditional expression");
            ExprPtr orelse = parse_test();
            Span span = merge(e->span, orelse->span);
            return make_expr(span, IfExpExpr{std::move(test), std::move(e), std::move(orelse)});
        }
        return e;
    }

    ExprPtr parse_lambda() {
        const Token& kw = advance();
        LambdaExpr lam;
        lam.args = parse_parameters(false, U":");
        expect_op(U":", "after lambda parameters");
        lam.body = parse_test();
        Span span = merge(token_span(kw), lam.body->span);
        return make_expr(span, std::move(lam));
    }

    ExprPtr parse_or_test() { return parse_bool_op(U"or", true); }

    ExprPtr parse_bool_op(std::u32string_view kw, bool is_or) {
        ExprPtr first = is_or ? parse_bool_op(U"and", false) : parse_not_test();
        if (!at_keyword(kw)) return first;
        std::vector<ExprPtr> values;
        Span span = first->span;
        values.push_back(std::move(first));
        while (eat_keyword(kw)) {
            values.push_back(is_or ? parse_bool_op(U"and", false) : parse_not_test());
        }
        span = merge(span, values.back()->span);
        return make_expr(span, BoolOpExpr{is_or, std::move(values)});
    }

    ExprPtr parse_not_test() {
        if (at_keyword(U"not")) {
            const Token& kw = advance();
            ExprPtr operand = parse_not_test();
            Span span = merge(token_span(kw), operand->span);
            return make_expr(span, UnaryOpExpr{UnaryOp::not_, std::move(operand)});
        }
        return parse_comparison();
    }

    bool at_compare_op() const {
        if (at_keyword(U"in") || at_keyword(U"is") || at_keyword(U"not")) return true;
        if (peek().kind != TokenKind::op) return false;
        const std::u32string& s = peek().text;
        return s == U"<" || s == U">" || s == U"==" || s == U">=" || s == U"<=" || s == U"!=";
    }

    CompareOp parse_compare_op() {
        if (eat_keyword(U"in")) return CompareOp::in;
        if (at_keyword(U"not")) {
            advance();
            if (!eat_keyword(U"in")) fail("expected 'in' after 'not' in comparison");
            return CompareOp::not_in;
        }
        if (eat_keyword(U"is")) {
            if (eat_keyword(U"not")) return CompareOp::is_not;
            return CompareOp::is;
        }
        const std::u32string s = advance().text;
        if (s == U"<") return CompareOp::lt;
        if (s == U">") return CompareOp::gt;
        if (s == U"==") return CompareOp::eq;
        if (s == U">=") return CompareOp::gt_e;
        if (s == U"<=") return CompareOp::lt_e;
        return CompareOp::neq;
    }

    ExprPtr parse_comparison() {
        ExprPtr left = parse_expr_level();
        if (!at_compare_op()) return left;
        // "not" only begins a comparison operator as part of "not in".
        if (at_keyword(U"not") && !(peek(1).kind == TokenKind::name && peek(1).text == U"in"))
            return left;
        CompareExpr cmp;
        Span span = left->span;
        cmp.left = std::move(left);
        while (at_compare_op()) {
            if (at_keyword(U"not") &&
                !(peek(1).kind == TokenKind::name && peek(1).text == U"in"))
                break;
            cmp.ops.push_back(parse_compare_op());
            cmp.comparators.push_back(parse_expr_level());
        }
        span = merge(span, cmp.comparators.back()->span);
        return make_expr(span, std::move(cmp));
    }

    struct BinLevel {
        std::vector<std::pair<std::u32string, BinaryOp>> ops;
    };

    ExprPtr parse_binary_chain(int level) {
        static const std::vector<BinLevel> levels = {
            {{{U"|", BinaryOp::bit_or}}},
            {{{U"^", BinaryOp::bit_xor}}},
            {{{U"&", BinaryOp::bit_and}}},
            {{{U"<<", BinaryOp::lshift}, {U">>", BinaryOp::rshift}}},
            {{{U"+", BinaryOp::add}, {U"-", BinaryOp::sub}}},
            {{{U"*", BinaryOp::mult},
              {U"@", BinaryOp::mat_mult},
              {U"/", BinaryOp::div},
              {U"%", BinaryOp::mod},
              {U"//", BinaryOp::floor_div}}},
        };
        if (level >= static_cast<int>(levels.size())) return parse_factor();
        ExprPtr left = parse_binary_chain(level + 1);
        while (peek().kind == TokenKind::op) {
            const BinLevel& lv = levels[level];
            auto it = std::find_if(lv.ops.begin(), lv.ops.end(),
                                   [&](const auto& p) { return p.first == peek().text; });
            if (it == lv.ops.end()) break;
            advance();
            ExprPtr right = parse_binary_chain(level + 1);
            Span span = merge(left->span, right->span);
            left = make_expr(span, BinOpExpr{it->second, std::move(left), std::move(right)});
        }
        return left;
    }

    // "expr" in the grammar: the bitwise-or level (no comparisons/ternary).
    ExprPtr parse_expr_level() { return parse_binary_chain(0); }

    ExprPtr parse_factor() {
        if (peek().kind == TokenKind::op &&
            (peek().text == U"+" || peek().text == U"-" || peek().text == U"~")) {
            const Token& op_tok = advance();
            UnaryOp op = op_tok.text == U"+"   ? UnaryOp::uadd
                         : op_tok.text == U"-" ? UnaryOp::usub
                                               : UnaryOp::invert;
            ExprPtr operand = parse_factor();
            Span span = merge(token_span(op_tok), operand->span);
            return make_expr(span, UnaryOpExpr{op, std::move(operand)});
        }
        return parse_power();
    }

    ExprPtr parse_power() {
        ExprPtr base;
        if (at_keyword(U"await")) {
            const Token& kw = advance();
            ExprPtr value = parse_atom_with_trailers();
            Span span = merge(token_span(kw), value->span);
            base = make_expr(span, AwaitExpr{std::move(value)});
        } else {
            base = parse_atom_with_trailers();
        }
        if (eat_op(U"**")) {
            ExprPtr exponent = parse_factor();
            Span span = merge(base->span, exponent->span);
            return make_expr(span, BinOpExpr{BinaryOp::pow, std::move(base), std::move(exponent)});
        }
        return base;
    }

    ExprPtr parse_atom_with_trailers() {
        ExprPtr e = parse_atom();
        while (true) {
            if (at_op(U".")) {
                advance();
                std::u32string attr = expect_name("after '.'");
                Span span = merge(e->span, end_span());
                e = make_expr(span, AttributeExpr{std::move(e), std::move(attr), Ctx::load});
            } else if (at_op(U"(")) {
                advance();
                CallExpr call;
                call.func = std::move(e);
                if (!at_op(U")")) parse_call_arguments(call.args, call.keywords);
                expect_op(U")", "to close call");
                Span span = merge(call.func->span, end_span());
                e = make_expr(span, std::move(call));
            } else if (at_op(U"[")) {
                advance();
                ExprPtr slice = parse_subscript_list();
                expect_op(U"]", "to close subscript");
                Span span = merge(e->span, end_span());
                e = make_expr(span, SubscriptExpr{std::move(e), std::move(slice), Ctx::load});
            } else {
                break;
            }
        }
        return e;
    }

    void parse_call_arguments(std::vector<ExprPtr>& args, std::vector<Keyword>& keywords) {
        bool seen_keyword = false;
        do {
            if (at_op(U")")) break;  // trailing comma
            const Token& start = peek();
            if (at_op(U"**")) {
                advance();
                Keyword kw;
                kw.value = parse_test();
                kw.span = merge(token_span(start), kw.value->span);
                keywords.push_back(std::move(kw));
                seen_keyword = true;
                continue;
            }
            if (at_op(U"*")) {
                args.push_back(parse_star_expr());
                continue;
            }
            ExprPtr e = parse_test();
            if (at_op(U"=") ) {
                advance();
                auto* name = e->as<NameExpr>();
                if (!name) fail_at("keyword argument name must be a plain name", e->span);
                Keyword kw;
                kw.arg = name->id;
                kw.value = parse_test();
                kw.span = merge(e->span, kw.value->span);
                keywords.push_back(std::move(kw));
                seen_keyword = true;
                continue;
            }
            if (at_op(U":=")) {
                advance();
                if (!e->as<NameExpr>())
                    fail_at("cannot use this expression as an assignment target", e->span);
                set_ctx(*e, Ctx::store, "assign to");
                ExprPtr value = parse_test();
                Span span = merge(e->span, value->span);
                e = make_expr(span, NamedExprExpr{std::move(e), std::move(value)});
            } else if (at_keyword(U"for") || (at_keyword(U"async") && peek(1).kind == TokenKind::name &&
                                              peek(1).text == U"for")) {
                // Sole-argument generator expression: f(x for x in xs).
                GeneratorExpExpr gen;
                gen.elt = std::move(e);
                gen.generators = parse_comprehension_clauses();
                Span span = merge(gen.elt->span, end_span());
                args.push_back(make_expr(span, std::move(gen)));
                return;
            }
            if (seen_keyword) fail_at("positional argument follows keyword argument", e->span);
            args.push_back(std::move(e));
        } while (eat_op(U","));
    }

    std::vector<Comprehension> parse_comprehension_clauses() {
        std::vector<Comprehension> clauses;
        while (true) {
            bool is_async = false;
            if (at_keyword(U"async") && peek(1).kind == TokenKind::name &&
                peek(1).text == U"for") {
                advance();
                is_async = true;
            }
            if (!eat_keyword(U"for")) break;
            Comprehension c;
            c.is_async = is_async;
            c.target = parse_target_list(U"in");
            if (!eat_keyword(U"in")) fail("expected 'in' in comprehension");
            c.iter = parse_or_test();
            while (at_keyword(U"if")) {
                advance();
                c.ifs.push_back(parse_or_test());
            }
            clauses.push_back(std::move(c));
            if (!at_keyword(U"for") && !at_keyword(U"async")) break;
        }
        if (clauses.empty()) fail("expected 'for' in comprehension");
        return clauses;
    }

    ExprPtr parse_subscript_item() {
        ExprPtr lower;
        if (!at_op(U":")) {
            lower = parse_test();
            if (!at_op(U":")) return lower;  // plain index
        }
        const Span start = lower ? lower->span : token_span(peek());
        expect_op(U":", "in slice");
        ExprPtr upper;
        if (!at_op(U":") && !at_op(U",") && !at_op(U"]")) upper = parse_test();
        ExprPtr step;
        if (eat_op(U":")) {
            if (!at_op(U",") && !at_op(U"]")) step = parse_test();
        }
        Span span = merge(start, end_span());
        return make_expr(span, SliceExpr{std::move(lower), std::move(upper), std::move(step)});
    }

    ExprPtr parse_subscript_list() {
        ExprPtr first = parse_subscript_item();
        if (!at_op(U",")) return first;
        std::vector<ExprPtr> elts;
        Span span = first->span;
        elts.push_back(std::move(first));
        while (eat_op(U",")) {
            if (at_op(U"]")) break;
            elts.push_back(parse_subscript_item());
        }
        span = merge(span, elts.back()->span);
        return make_expr(span, TupleExpr{std::move(elts), Ctx::load});
    }

    // -- atoms ----------------------------------------------------------------

    ExprPtr parse_atom() {
        const Token& t = peek();
        switch (t.kind) {
            case TokenKind::number: {
                advance();
                ConstantExpr c;
                c.kind = number_kind(t.text);
                c.value = t.text;
                return make_expr(token_span(t), std::move(c));
            }
            case TokenKind::string:
                return parse_string_group();
            case TokenKind::name: {
                if (t.text == U"True" || t.text == U"False") {
                    advance();
                    ConstantExpr c;
                    c.kind = ConstantKind::boolean;
                    c.bool_value = t.text == U"True";
                    return make_expr(token_span(t), std::move(c));
                }
                if (t.text == U"None") {
                    advance();
                    return make_expr(token_span(t), ConstantExpr{ConstantKind::none, {}, false});
                }
                if (is_keyword_text(t.text))
                    fail("keyword cannot be used as an expression here");
                advance();
                return make_expr(token_span(t), NameExpr{t.text, Ctx::load});
            }
            case TokenKind::op:
                if (t.text == U"...") {
                    advance();
                    return make_expr(token_span(t),
                                     ConstantExpr{ConstantKind::ellipsis, {}, false});
                }
                if (t.text == U"(") return parse_paren_atom();
                if (t.text == U"[") return parse_list_atom();
                if (t.text == U"{") return parse_brace_atom();
                fail("unexpected operator");
            case TokenKind::error:
                fail("invalid character in expression");
            default:
                fail("unexpected token");
        }
    }

    ExprPtr parse_paren_atom() {
        const Token& open = advance();
        if (at_op(U")")) {
            advance();
            return make_expr(merge(token_span(open), end_span()), TupleExpr{{}, Ctx::load});
        }
        if (at_keyword(U"yield")) {
            ExprPtr e = parse_yield_expr();
            expect_op(U")", "to close parenthesis");
            return e;
        }
        ExprPtr first = at_op(U"*") ? parse_star_expr() : parse_namedexpr_test();
        if (at_keyword(U"for") || at_keyword(U"async")) {
            if (first->as<StarredExpr>())
                fail_at("iterable unpacking cannot be used in a comprehension", first->span);
            GeneratorExpExpr gen;
            gen.elt = std::move(first);
            gen.generators = parse_comprehension_clauses();
            expect_op(U")", "to close generator expression");
            Span span = merge(token_span(open), end_span());
            return make_expr(span, std::move(gen));
        }
        if (at_op(U",")) {
            std::vector<ExprPtr> elts;
            elts.push_back(std::move(first));
            while (eat_op(U",")) {
                if (at_op(U")")) break;
                elts.push_back(at_op(U"*") ? parse_star_expr() : parse_namedexpr_test());
            }
            expect_op(U")", "to close tuple");
            Span span = merge(token_span(open), end_span());
            return make_expr(span, TupleExpr{std::move(elts), Ctx::load});
        }
        expect_op(U")", "to close parenthesis");
        return first;  // grouped expression keeps its own span
    }

    ExprPtr parse_list_atom() {
        const Token& open = advance();
        if (at_op(U"]")) {
            advance();
            return make_expr(merge(token_span(open), end_span()), ListExpr{{}, Ctx::load});
        }
        ExprPtr first = at_op(U"*") ? parse_star_expr() : parse_namedexpr_test();
        if (at_keyword(U"for") || at_keyword(U"async")) {
            if (first->as<StarredExpr>())
                fail_at("iterable unpacking cannot be used in a comprehension", first->span);
            ListCompExpr comp;
            comp.elt = std::move(first);
            comp.generators = parse_comprehension_clauses();
            expect_op(U"]", "to close list comprehension");
            Span span = merge(token_span(open), end_span());
            return make_expr(span, std::move(comp));
        }
        std::vector<ExprPtr> elts;
        elts.push_back(std::move(first));
        while (eat_op(U",")) {
            if (at_op(U"]")) break;
            elts.push_back(at_op(U"*") ? parse_star_expr() : parse_namedexpr_test());
        }
        expect_op(U"]", "to close list");
        Span span = merge(token_span(open), end_span());
        return make_expr(span, ListExpr{std::move(elts), Ctx::load});
    }

    ExprPtr parse_brace_atom() {
        const Token& open = advance();
        if (at_op(U"}")) {
            advance();
            return make_expr(merge(token_span(open), end_span()), DictExpr{});
        }
        // Dict entry, ** expansion, or set element decides the shape.
        if (at_op(U"**")) {
            DictExpr dict;
            parse_dict_entries(dict);
            expect_op(U"}", "to close dict");
            Span span = merge(token_span(open), end_span());
            return make_expr(span, std::move(dict));
        }
        ExprPtr first = at_op(U"*") ? parse_star_expr() : parse_namedexpr_test();
        if (at_op(U":")) {
            advance();
            ExprPtr value = parse_test();
            if (at_keyword(U"for") || at_keyword(U"async")) {
                DictCompExpr comp;
                comp.key = std::move(first);
                comp.value = std::move(value);
                comp.generators = parse_comprehension_clauses();
                expect_op(U"}", "to close dict comprehension");
                Span span = merge(token_span(open), end_span());
                return make_expr(span, std::move(comp));
            }
            DictExpr dict;
            dict.keys.push_back(std::move(first));
            dict.values.push_back(std::move(value));
            if (eat_op(U",")) parse_dict_entries(dict);
            expect_op(U"}", "to close dict");
            Span span = merge(token_span(open), end_span());
            return make_expr(span, std::move(dict));
        }
        if (at_keyword(U"for") || at_keyword(U"async")) {
            if (first->as<StarredExpr>())
                fail_at("iterable unpacking cannot be used in a comprehension", first->span);
            SetCompExpr comp;
            comp.elt = std::move(first);
            comp.generators = parse_comprehension_clauses();
            expect_op(U"}", "to close set comprehension");
            Span span = merge(token_span(open), end_span());
            return make_expr(span, std::move(comp));
        }
        SetExpr set;
        set.elts.push_back(std::move(first));
        while (eat_op(U",")) {
            if (at_op(U"}")) break;
            set.elts.push_back(at_op(U"*") ? parse_star_expr() : parse_namedexpr_test());
        }
        expect_op(U"}", "to close set");
        Span span = merge(token_span(open), end_span());
        return make_expr(span, std::move(set));
    }

    void parse_dict_entries(DictExpr& dict) {
        while (!at_op(U"}")) {
            if (at_op(U"**")) {
                advance();
                dict.keys.push_back(nullptr);
                dict.values.push_back(parse_expr_level());
            } else {
                ExprPtr key = parse_test();
                expect_op(U":", "in dict entry");
                dict.keys.push_back(std::move(key));
                dict.values.push_back(parse_test());
            }
            if (!eat_op(U",")) break;
        }
    }

    // -- string literals ------------------------------------------------------

    ExprPtr parse_string_group() {
        std::vector<Token> group;
        group.push_back(advance());
        while (peek().kind == TokenKind::string) group.push_back(advance());
        const Span group_span = merge(token_span(group.front()), token_span(group.back()));

        bool any_bytes = false, any_text = false, any_fstring = false;
        std::vector<StringInfo> infos;
        infos.reserve(group.size());
        for (const Token& tok : group) {
            StringInfo info = classify_string(tok.text, tok.start.line, tok.start.col);
            (info.is_bytes ? any_bytes : any_text) = true;
            if (info.is_fstring) any_fstring = true;
            infos.push_back(info);
        }
        if (any_bytes && (any_text || any_fstring))
            throw ParseError("cannot mix bytes and text literals", group.front().start.line,
                             group.front().start.col);
        if (any_bytes) {
            std::u32string raw;
            for (const Token& tok : group) raw += tok.text;
            ConstantExpr c;
            c.kind = ConstantKind::bytes;
            c.value = std::move(raw);
            return make_expr(group_span, std::move(c));
        }
        if (!any_fstring) {
            std::u32string value;
            for (size_t i = 0; i < group.size(); ++i) {
                std::u32string_view body(group[i].text);
                body = body.substr(infos[i].body_begin,
                                   infos[i].body_end - infos[i].body_begin);
                value += infos[i].is_raw ? std::u32string(body) : cook_escapes(body);
            }
            ConstantExpr c;
            c.kind = ConstantKind::string;
            c.value = std::move(value);
            return make_expr(group_span, std::move(c));
        }

        JoinedStrExpr joined;
        std::u32string literal;  // pending literal text, merged across parts
        auto flush_literal = [&]() {
            if (literal.empty()) return;
            ConstantExpr c;
            c.kind = ConstantKind::string;
            c.value = std::move(literal);
            literal.clear();
            joined.values.push_back(make_expr(group_span, std::move(c)));
        };
        for (size_t i = 0; i < group.size(); ++i) {
            const Token& tok = group[i];
            const StringInfo& info = infos[i];
            std::u32string_view body =
                std::u32string_view(tok.text).substr(info.body_begin,
                                                     info.body_end - info.body_begin);
            if (!info.is_fstring) {
                literal += info.is_raw ? std::u32string(body) : cook_escapes(body);
                continue;
            }
            parse_fstring_body(tok, info, body, group_span, literal, flush_literal,
                               joined.values);
        }
        flush_literal();
        return make_expr(group_span, std::move(joined));
    }

    // Source position of each code point of an f-string body (and one past
    // the end), walked from the token's start coordinates.
    static std::vector<py::Pos> body_positions(const Token& tok, const StringInfo& info,
                                               std::u32string_view body) {
        std::vector<py::Pos> pos;
        pos.reserve(body.size() + 1);
        py::Pos cur = tok.start;
        for (size_t i = 0; i < info.body_begin; ++i) {
            if (tok.text[i] == U'\n') {
                cur.line += 1;
                cur.col = 0;
            } else {
                cur.col += 1;
            }
        }
        for (size_t i = 0; i < body.size(); ++i) {
            pos.push_back(cur);
            if (body[i] == U'\n') {
                cur.line += 1;
                cur.col = 0;
            } else {
                cur.col += 1;
            }
        }
        pos.push_back(cur);
        return pos;
    }

    void parse_fstring_body(const Token& tok, const StringInfo& info, std::u32string_view body,
                            const Span& group_span, std::u32string& literal,
                            const std::function<void()>& flush_literal,
                            std::vector<ExprPtr>& parts) {
        const std::vector<py::Pos> pos = body_positions(tok, info, body);
        size_t i = 0;
        std::u32string chunk;  // raw literal text of this token, cooked at flush
        auto flush_chunk = [&]() {
            if (chunk.empty()) return;
            literal += info.is_raw ? chunk : cook_escapes(chunk);
            chunk.clear();
        };
        while (i < body.size()) {
            char32_t c = body[i];
            if (c == U'{' && i + 1 < body.size() && body[i + 1] == U'{') {
                chunk += U'{';
                i += 2;
                continue;
            }
            if (c == U'}' && i + 1 < body.size() && body[i + 1] == U'}') {
                chunk += U'}';
                i += 2;
                continue;
            }
            if (c == U'}')
                throw ParseError("single '}' is not allowed in a formatted string literal",
                                 pos[i].line, pos[i].col);
            if (c != U'{') {
                chunk += c;
                ++i;
                continue;
            }
            flush_chunk();
            flush_literal();
            i += 1;  // past '{'
            parts.push_back(parse_replacement_field(body, pos, i, group_span,
                                                    /*in_format_spec=*/false));
        }
        flush_chunk();
    }

    ExprPtr parse_replacement_field(std::u32string_view body, const std::vector<py::Pos>& pos,
                                    size_t& i, const Span& group_span, bool in_format_spec) {
        const size_t expr_begin = i;
        int depth = 0;
        char32_t quote = 0;
        while (i < body.size()) {
            char32_t c = body[i];
            if (quote != 0) {
                if (c == quote) quote = 0;
                ++i;
                continue;
            }
            if (c == U'\'' || c == U'"') {
                quote = c;
                ++i;
                continue;
            }
            if (c == U'\\')
                throw ParseError("backslash not allowed in a format expression", pos[i].line,
                                 pos[i].col);
            if (c == U'(' || c == U'[' || c == U'{') {
                ++depth;
                ++i;
                continue;
            }
            if (c == U')' || c == U']') {
                --depth;
                ++i;
                continue;
            }
            if (c == U'}') {
                if (depth == 0) break;
                --depth;
                ++i;
                continue;
            }
            if (depth == 0 && c == U'!' && i + 1 < body.size() && body[i + 1] != U'=') break;
            if (depth == 0 && c == U':') break;
            ++i;
        }
        if (i >= body.size())
            throw ParseError("unterminated replacement field in formatted string literal",
                             pos[expr_begin == 0 ? 0 : expr_begin - 1].line,
                             pos[expr_begin == 0 ? 0 : expr_begin - 1].col);
        const size_t expr_end = i;
        FormattedValueExpr field;
        field.value = parse_embedded_expression(body.substr(expr_begin, expr_end - expr_begin),
                                                pos, expr_begin);

        if (body[i] == U'!') {
            char32_t conv = i + 1 < body.size() ? body[i + 1] : U'\0';
            if (conv != U's' && conv != U'r' && conv != U'a')
                throw ParseError("invalid conversion character in formatted string literal",
                                 pos[i].line, pos[i].col);
            field.conversion = static_cast<int>(conv);
            i += 2;
            if (i >= body.size() || (body[i] != U':' && body[i] != U'}'))
                throw ParseError("expected ':' or '}' after conversion", pos[std::min(i, pos.size() - 1)].line,
                                 pos[std::min(i, pos.size() - 1)].col);
        }
        if (body[i] == U':') {
            if (in_format_spec)
                throw ParseError("format specs may only nest one level", pos[i].line, pos[i].col);
            i += 1;
            field.format_spec = parse_format_spec(body, pos, i, group_span);
        }
        if (i >= body.size() || body[i] != U'}')
            throw ParseError("expected '}' to close replacement field",
                             pos[std::min(i, pos.size() - 1)].line,
                             pos[std::min(i, pos.size() - 1)].col);
        i += 1;  // past '}'
        return make_expr(group_span, std::move(field));
    }

    ExprPtr parse_format_spec(std::u32string_view body, const std::vector<py::Pos>& pos,
                              size_t& i, const Span& group_span) {
        JoinedStrExpr spec;
        std::u32string literal;
        auto flush = [&]() {
            if (literal.empty()) return;
            ConstantExpr c;
            c.kind = ConstantKind::string;
            c.value = std::move(literal);
            literal.clear();
            spec.values.push_back(make_expr(group_span, std::move(c)));
        };
        while (i < body.size() && body[i] != U'}') {
            if (body[i] == U'{') {
                flush();
                i += 1;
                spec.values.push_back(
                    parse_replacement_field(body, pos, i, group_span, /*in_format_spec=*/true));
                continue;
            }
            literal += body[i];
            i += 1;
        }
        flush();
        return make_expr(group_span, std::move(spec));
    }

    // Parse the expression text of a replacement field. The text is wrapped
    // in parentheses so embedded newlines tokenize, then every node position
    // is mapped back to real source coordinates through the body index.
    ExprPtr parse_embedded_expression(std::u32string_view expr_text,
                                      const std::vector<py::Pos>& pos, size_t offset_in_body) {
        bool only_space = true;
        for (char32_t c : expr_text)
            if (!text::is_python_space(c)) only_space = false;
        if (expr_text.empty() || only_space)
            throw ParseError("empty expression in formatted string literal",
                             pos[offset_in_body].line, pos[offset_in_body].col);

        std::u32string wrapped;
        wrapped.reserve(expr_text.size() + 3);
        wrapped += U'(';
        wrapped += expr_text;
        wrapped += U")\n";
        std::vector<Token> sub_tokens;
        try {
            sub_tokens = py::tokenize_lines(text::split_lines_keepends(std::u32string_view(wrapped)));
        } catch (const py::TokenizeError& e) {
            const py::Pos p = map_sub_position(e.line, e.col, expr_text, pos, offset_in_body);
            throw ParseError("invalid syntax in formatted string expression", p.line, p.col);
        }
        Parser sub(std::move(sub_tokens));
        ExprPtr inner;
        try {
            ExprPtr grouped = sub.parse_single_expression();
            inner = std::move(grouped);
        } catch (const ParseError& e) {
            const py::Pos p = map_sub_position(e.line, e.col, expr_text, pos, offset_in_body);
            throw ParseError(e.what(), p.line, p.col);
        }
        remap_spans(*inner, expr_text, pos, offset_in_body);
        return inner;
    }

    // Map a (line, col) inside the wrapped sub-source to real coordinates.
    static py::Pos map_sub_position(int line, int col, std::u32string_view expr_text,
                                    const std::vector<py::Pos>& pos, size_t offset_in_body) {
        std::vector<size_t> line_starts = {0};
        for (size_t k = 0; k < expr_text.size(); ++k)
            if (expr_text[k] == U'\n') line_starts.push_back(k + 1);
        size_t idx;
        if (line <= 1) {
            idx = static_cast<size_t>(std::max(0, col - 1));  // strip the added '('
        } else if (static_cast<size_t>(line - 1) < line_starts.size()) {
            idx = line_starts[line - 1] + static_cast<size_t>(col);
        } else {
            idx = expr_text.size();
        }
        idx = std::min(idx + offset_in_body, pos.size() - 1);
        return pos[idx];
    }

    static void remap_spans(Expr& e, std::u32string_view expr_text,
                            const std::vector<py::Pos>& pos, size_t offset_in_body) {
        const py::Pos start =
            map_sub_position(e.span.first_line, e.span.first_col, expr_text, pos, offset_in_body);
        const py::Pos end =
            map_sub_position(e.span.last_line, e.span.last_col, expr_text, pos, offset_in_body);
        e.span = Span{start.line, start.col, end.line, end.col};
        visit_children(e, [&](Expr& child) { remap_spans(child, expr_text, pos, offset_in_body); });
    }

    template <typename Fn>
    static void visit_children(Expr& e, const Fn& fn) {
        auto opt = [&](const ExprPtr& p) {
            if (p) fn(*p);
        };
        auto each = [&](const std::vector<ExprPtr>& v) {
            for (const auto& p : v) opt(p);
        };
        auto args_of = [&](Arguments& a) {
            for (auto& arg : a.posonly) opt(arg.annotation);
            for (auto& arg : a.args) opt(arg.annotation);
            if (a.vararg) opt(a.vararg->annotation);
            for (auto& arg : a.kwonly) opt(arg.annotation);
            each(a.kw_defaults);
            if (a.kwarg) opt(a.kwarg->annotation);
            each(a.defaults);
        };
        std::visit(
            [&](auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, BoolOpExpr>) {
                    each(node.values);
                } else if constexpr (std::is_same_v<T, NamedExprExpr>) {
                    opt(node.target);
                    opt(node.value);
                } else if constexpr (std::is_same_v<T, BinOpExpr>) {
                    opt(node.left);
                    opt(node.right);
                } else if constexpr (std::is_same_v<T, UnaryOpExpr>) {
                    opt(node.operand);
                } else if constexpr (std::is_same_v<T, LambdaExpr>) {
                    args_of(node.args);
                    opt(node.body);
                } else if constexpr (std::is_same_v<T, IfExpExpr>) {
                    opt(node.test);
                    opt(node.body);
                    opt(node.orelse);
                } else if constexpr (std::is_same_v<T, DictExpr>) {
                    each(node.keys);
                    each(node.values);
                } else if constexpr (std::is_same_v<T, SetExpr>) {
                    each(node.elts);
                } else if constexpr (std::is_same_v<T, ListCompExpr> ||
                                     std::is_same_v<T, SetCompExpr> ||
                                     std::is_same_v<T, GeneratorExpExpr>) {
                    opt(node.elt);
                    for (auto& g : node.generators) {
                        opt(g.target);
                        opt(g.iter);
                        each(g.ifs);
                    }
                } else if constexpr (std::is_same_v<T, DictCompExpr>) {
                    opt(node.key);
                    opt(node.value);
                    for (auto& g : node.generators) {
                        opt(g.target);
                        opt(g.iter);
                        each(g.ifs);
                    }
                } else if constexpr (std::is_same_v<T, AwaitExpr> ||
                                     std::is_same_v<T, YieldFromExpr>) {
                    opt(node.value);
                } else if constexpr (std::is_same_v<T, YieldExpr>) {
                    opt(node.value);
                } else if constexpr (std::is_same_v<T, CompareExpr>) {
                    opt(node.left);
                    each(node.comparators);
                } else if constexpr (std::is_same_v<T, CallExpr>) {
                    opt(node.func);
                    each(node.args);
                    for (auto& kw : node.keywords) opt(kw.value);
                } else if constexpr (std::is_same_v<T, FormattedValueExpr>) {
                    opt(node.value);
                    opt(node.format_spec);
                } else if constexpr (std::is_same_v<T, JoinedStrExpr>) {
                    each(node.values);
                } else if constexpr (std::is_same_v<T, AttributeExpr> ||
                                     std::is_same_v<T, StarredExpr>) {
                    opt(node.value);
                } else if constexpr (std::is_same_v<T, SubscriptExpr>) {
                    opt(node.value);
                    opt(node.slice);
                } else if constexpr (std::is_same_v<T, ListExpr> ||
                                     std::is_same_v<T, TupleExpr>) {
                    each(node.elts);
                } else if constexpr (std::is_same_v<T, SliceExpr>) {
                    opt(node.lower);
                    opt(node.upper);
                    opt(node.step);
                } else {
                    // ConstantExpr, NameExpr: no children.
                }
            },
            e.node);
    }
};

}  // namespace

Module parse_module(const PythonSource& src) {
    Parser parser(py::tokenize(src));
    Module mod = parser.parse_file();
    return mod;
}

Module parse_module(const std::string& source_text) {
    return parse_module(PythonSource::from_text(source_text));
}

ExprPtr parse_expression(const std::string& source_text) {
    Parser parser(py::tokenize_text(source_text));
    return parser.parse_single_expression();
}

}  // namespace nblint::ast
