#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "nblint/source.hpp"
#include "nblint/tokenize.hpp"

namespace nblint::ast {

// How a name participates in its statement: bound (Store), read (Load), or
// unbound (Del). Composite targets (attribute/subscript/starred/list/tuple)
// carry the same marker.
enum class Ctx { load, store, del_ };

const char* to_string(Ctx c);

// Half-open is not used here: both ends are inclusive token coordinates,
// `first_line:first_col` .. `last_line:last_col`, with 1-based lines and
// 0-based columns exactly as the tokenizer reports them. `last_col` is the
// column one past the final character (a token-end coordinate).
struct Span {
    int first_line = 1;
    int first_col = 0;
    int last_line = 1;
    int last_col = 0;

    friend bool operator==(const Span&, const Span&) = default;
};

struct Expr;
struct Stmt;
using ExprPtr = std::unique_ptr<Expr>;
using StmtPtr = std::unique_ptr<Stmt>;

// ---------------------------------------------------------------------------
// Operator tags. Analyses never branch on the specific operator, but keeping
// them preserves the full statement for printing and keeps parsing honest.
enum class BinaryOp { add, sub, mult, mat_mult, div, mod, pow, lshift, rshift, bit_or, bit_xor, bit_and, floor_div };
enum class UnaryOp { invert, not_, uadd, usub };
enum class CompareOp { eq, neq, lt, lt_e, gt, gt_e, is, is_not, in, not_in };

// ---------------------------------------------------------------------------
// Support pieces (not expressions or statements themselves).

struct Arg {
    std::u32string name;
    ExprPtr annotation;  // may be null
    Span span;
};

// Parameter list of a function or lambda. `defaults` aligns with the tail of
// posonly+args; `kw_defaults` aligns 1:1 with `kwonly` (null where a
// keyword-only parameter has no default).
struct Arguments {
    std::vector<Arg> posonly;
    std::vector<Arg> args;
    std::optional<Arg> vararg;
    std::vector<Arg> kwonly;
    std::vector<ExprPtr> kw_defaults;
    std::optional<Arg> kwarg;
    std::vector<ExprPtr> defaults;
};

struct Keyword {
    std::optional<std::u32string> arg;  // empty => ** unpacking
    ExprPtr value;
    Span span;
};

struct Comprehension {
    ExprPtr target;  // Store context
    ExprPtr iter;
    std::vector<ExprPtr> ifs;
    bool is_async = false;
};

struct WithItem {
    ExprPtr context;
    ExprPtr target;  // optional "as" target (Store context); may be null
};

struct ExceptHandler {
    ExprPtr type;                        // may be null (bare except)
    std::optional<std::u32string> name;  // "as name" binding
    std::vector<StmtPtr> body;
    Span span;
};

struct Alias {
    std::u32string name;  // dotted module path or imported symbol ("*" for star import)
    std::optional<std::u32string> asname;
    Span span;
};

// ---------------------------------------------------------------------------
// Expressions.

struct BoolOpExpr {
    bool is_or = false;  // false => and
    std::vector<ExprPtr> values;
};

struct NamedExprExpr {  // walrus: target := value
    ExprPtr target;     // always a plain Name with Store context
    ExprPtr value;
};

struct BinOpExpr {
    BinaryOp op;
    ExprPtr left;
    ExprPtr right;
};

struct UnaryOpExpr {
    UnaryOp op;
    ExprPtr operand;
};

struct LambdaExpr {
    Arguments args;
    ExprPtr body;
};

struct IfExpExpr {
    ExprPtr test;
    ExprPtr body;
    ExprPtr orelse;
};

struct DictExpr {
    // keys[i] is null for a ** expansion entry.
    std::vector<ExprPtr> keys;
    std::vector<ExprPtr> values;
};

struct SetExpr {
    std::vector<ExprPtr> elts;
};

struct ListCompExpr {
    ExprPtr elt;
    std::vector<Comprehension> generators;
};

struct SetCompExpr {
    ExprPtr elt;
    std::vector<Comprehension> generators;
};

struct DictCompExpr {
    ExprPtr key;
    ExprPtr value;
    std::vector<Comprehension> generators;
};

struct GeneratorExpExpr {
    ExprPtr elt;
    std::vector<Comprehension> generators;
};

struct AwaitExpr {
    ExprPtr value;
};

struct YieldExpr {
    ExprPtr value;  // may be null
};

struct YieldFromExpr {
    ExprPtr value;
};

struct CompareExpr {
    ExprPtr left;
    std::vector<CompareOp> ops;
    std::vector<ExprPtr> comparators;
};

struct CallExpr {
    ExprPtr func;
    std::vector<ExprPtr> args;  // positional, including Starred entries
    std::vector<Keyword> keywords;
};

// One {expression...} replacement field of a formatted string.
struct FormattedValueExpr {
    ExprPtr value;
    int conversion = -1;  // -1 none, or 's'/'r'/'a'
    ExprPtr format_spec;  // JoinedStr or null
};

struct JoinedStrExpr {
    std::vector<ExprPtr> values;  // Constant and FormattedValue parts
};

enum class ConstantKind { none, boolean, integer, floating, complex_num, string, bytes, ellipsis };

struct ConstantExpr {
    ConstantKind kind = ConstantKind::none;
    // For string constants: the cooked value (escapes resolved, implicit
    // concatenation applied). For numbers/bytes: the raw literal text.
    std::u32string value;
    bool bool_value = false;
};

struct AttributeExpr {
    ExprPtr value;
    std::u32string attr;
    Ctx ctx = Ctx::load;
};

struct SubscriptExpr {
    ExprPtr value;
    ExprPtr slice;  // plain index expr, Slice, or Tuple of them
    Ctx ctx = Ctx::load;
};

struct StarredExpr {
    ExprPtr value;
    Ctx ctx = Ctx::load;
};

struct NameExpr {
    std::u32string id;
    Ctx ctx = Ctx::load;
};

struct ListExpr {
    std::vector<ExprPtr> elts;
    Ctx ctx = Ctx::load;
};

struct TupleExpr {
    std::vector<ExprPtr> elts;
    Ctx ctx = Ctx::load;
};

struct SliceExpr {
    ExprPtr lower;  // any of the three may be null
    ExprPtr upper;
    ExprPtr step;
};

using ExprNode =
    std::variant<BoolOpExpr, NamedExprExpr, BinOpExpr, UnaryOpExpr, LambdaExpr, IfExpExpr,
                 DictExpr, SetExpr, ListCompExpr, SetCompExpr, DictCompExpr, GeneratorExpExpr,
                 AwaitExpr, YieldExpr, YieldFromExpr, CompareExpr, CallExpr, FormattedValueExpr,
                 JoinedStrExpr, ConstantExpr, AttributeExpr, SubscriptExpr, StarredExpr, NameExpr,
                 ListExpr, TupleExpr, SliceExpr>;

struct Expr {
    Span span;
    ExprNode node;

    template <typename T>
    T* as() {
        return std::get_if<T>(&node);
    }
    template <typename T>
    const T* as() const {
        return std::get_if<T>(&node);
    }
};

// ---------------------------------------------------------------------------
// Statements.

struct FunctionDefStmt {
    std::u32string name;
    Arguments args;
    std::vector<StmtPtr> body;
    std::vector<ExprPtr> decorators;
    ExprPtr returns;  // may be null
    bool is_async = false;
};

struct ClassDefStmt {
    std::u32string name;
    std::vector<ExprPtr> bases;
    std::vector<Keyword> keywords;
    std::vector<StmtPtr> body;
    std::vector<ExprPtr> decorators;
};

struct ReturnStmt {
    ExprPtr value;  // may be null
};

struct DeleteStmt {
    std::vector<ExprPtr> targets;  // Del context
};

struct AssignStmt {
    std::vector<ExprPtr> targets;  // Store context; several for chained =
    ExprPtr value;
};

struct AugAssignStmt {
    ExprPtr target;  // Name/Attribute/Subscript, Store context
    BinaryOp op;
    ExprPtr value;
};

struct AnnAssignStmt {
    ExprPtr target;
    ExprPtr annotation;
    ExprPtr value;  // may be null
    bool simple = false;
};

struct ForStmt {
    ExprPtr target;  // Store context
    ExprPtr iter;
    std::vector<StmtPtr> body;
    std::vector<StmtPtr> orelse;
    bool is_async = false;
};

struct WhileStmt {
    ExprPtr test;
    std::vector<StmtPtr> body;
    std::vector<StmtPtr> orelse;
};

struct IfStmt {
    ExprPtr test;
    std::vector<StmtPtr> body;
    std::vector<StmtPtr> orelse;  // an elif chain nests another IfStmt here
};

struct WithStmt {
    std::vector<WithItem> items;
    std::vector<StmtPtr> body;
    bool is_async = false;
};

struct RaiseStmt {
    ExprPtr exc;    // may be null (bare raise)
    ExprPtr cause;  // "from" clause, may be null
};

struct TryStmt {
    std::vector<StmtPtr> body;
    std::vector<ExceptHandler> handlers;
    std::vector<StmtPtr> orelse;
    std::vector<StmtPtr> finalbody;
};

struct AssertStmt {
    ExprPtr test;
    ExprPtr msg;  // may be null
};

struct ImportStmt {
    std::vector<Alias> names;
};

struct ImportFromStmt {
    std::optional<std::u32string> module;  // empty for purely relative import
    std::vector<Alias> names;
    int level = 0;  // leading dots
};

struct GlobalStmt {
    std::vector<std::u32string> names;
};

struct NonlocalStmt {
    std::vector<std::u32string> names;
};

struct ExprStmt {
    ExprPtr value;
};

struct PassStmt {};
struct BreakStmt {};
struct ContinueStmt {};

using StmtNode =
    std::variant<FunctionDefStmt, ClassDefStmt, ReturnStmt, DeleteStmt, AssignStmt, AugAssignStmt,
                 AnnAssignStmt, ForStmt, WhileStmt, IfStmt, WithStmt, RaiseStmt, TryStmt,
                 AssertStmt, ImportStmt, ImportFromStmt, GlobalStmt, NonlocalStmt, ExprStmt,
                 PassStmt, BreakStmt, ContinueStmt>;

struct Stmt {
    Span span;
    StmtNode node;

    template <typename T>
    T* as() {
        return std::get_if<T>(&node);
    }
    template <typename T>
    const T* as() const {
        return std::get_if<T>(&node);
    }
};

struct Module {
    std::vector<StmtPtr> body;
};

// ---------------------------------------------------------------------------

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, int line, int col)
        : std::runtime_error(message), line(line), col(col) {}
    int line;
    int col;
};

// Parse a module. Throws ParseError (and lets TokenizeError from the token
// stage propagate). The grammar is the analyzed language at the 3.8 level:
// full expression/statement coverage including walrus, f-string replacement
// fields, and async constructs; match statements and parenthesized
// multi-item "with" lists are out of scope.
Module parse_module(const PythonSource& src);
Module parse_module(const std::string& text);

// Parse one expression (used for embedded expression text; exposed for tests).
ExprPtr parse_expression(const std::string& text);

}  // namespace nblint::ast
