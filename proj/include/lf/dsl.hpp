#pragma once

#include "lf/gauss.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace lf::dsl {

struct Loc {
    int line = 1, col = 1; // 1-based; col counts code points
};

struct Diagnostic {
    Loc loc;
    std::string message;
    std::vector<std::string> expected;
    // "file:line:col: error: message", the source line and a caret under the column
    std::string render(const std::string& source, const std::string& file = "<script>") const;
};

struct Expr {
    enum class Kind { number, imag, ident, lam, chi, neg, sum, prod, op_s, op_t, bracket };
    Kind kind = Kind::number;
    Q num;            // number
    std::string name; // ident
    unsigned power = 1; // lam^k, T^k
    std::vector<Expr> kids;
    Loc loc;
};
bool same_expr(const Expr& a, const Expr& b); // ignores locations

enum class Parity { even, odd, function };

struct Stmt {
    enum class Kind { coeff, deriv, gen, bracket, relationpack, field, patch, check };
    Kind kind = Kind::coeff;
    Loc loc;
    std::vector<std::string> names; // coeff: symbols; gen/field/patch/relationpack: [name];
                                    // bracket/deriv: [left, right]; check: [kind]
    std::vector<Loc> name_locs;
    Parity parity = Parity::even;        // gen
    std::optional<Q> weight;             // gen
    std::vector<Expr> exprs;             // bracket/deriv/field: [rhs]; check: arguments
    std::vector<std::pair<std::string, Expr>> relations; // relationpack
    std::vector<Loc> relation_locs;
    std::string path;                    // patch
};
bool same_stmt(const Stmt& a, const Stmt& b);

struct Script {
    std::vector<Stmt> stmts;
};
bool same_script(const Script& a, const Script& b);

struct ParseResult {
    std::optional<Script> script;
    std::vector<Diagnostic> errors;
    bool ok() const { return script.has_value() && errors.empty(); }
};

// Total: returns a script or diagnostics, never throws on malformed input.
ParseResult parse(const std::string& text);
// parse a single expression (used for command-line arguments)
ParseResult parse_expr(const std::string& text, Expr& out);

std::string render(const Script& s);
std::string render(const Stmt& s);
std::string render(const Expr& e);

// Names must be declared before use and defined once. Generator and field
// names share one namespace with coefficient symbols, relation packs and patches.
std::vector<Diagnostic> resolve(const Script& s);

bool is_keyword(const std::string& w);

} // namespace lf::dsl
