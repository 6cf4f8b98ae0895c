#include "lf/dsl.hpp"

#include <map>
#include <set>
#include <sstream>

namespace lf::dsl {

namespace {

const std::set<std::string> keywords = {"coeff", "deriv", "gen",   "bracket", "relationpack", "field",
                                        "patch", "check", "even",  "odd",     "function",     "weight",
                                        "lam",   "chi",   "S",     "T",       "i"};

enum class Tok { ident, integer, string, punct, end, bad };

struct Token {
    Tok kind = Tok::end;
    std::string text;
    Loc loc;
};

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_'; }
bool ident_char(unsigned char c) { return std::isalnum(c) || c == '_'; }

class Lexer {
public:
    explicit Lexer(const std::string& s) : s_(s) {}

    std::vector<Token> run(std::vector<Diagnostic>& errs)
    {
        std::vector<Token> out;
        while (true) {
            skip_space();
            Token t;
            t.loc = loc();
            if (i_ >= s_.size()) {
                t.kind = Tok::end;
                out.push_back(t);
                return out;
            }
            unsigned char c = static_cast<unsigned char>(s_[i_]);
            if (ident_start(c)) {
                t.kind = Tok::ident;
                while (i_ < s_.size() && ident_char(static_cast<unsigned char>(s_[i_]))) t.text += take();
                index_suffix(t.text);
            } else if (std::isdigit(c)) {
                t.kind = Tok::integer;
                while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) t.text += take();
            } else if (c == '"') {
                take();
                t.kind = Tok::string;
                bool closed = false;
                while (i_ < s_.size()) {
                    char d = take();
                    if (d == '"') {
                        closed = true;
                        break;
                    }
                    if (d == '\n') break;
                    if (d == '\\' && i_ < s_.size()) d = take();
                    t.text += d;
                }
                if (!closed) {
                    errs.push_back({t.loc, "unterminated string", {}});
                    t.kind = Tok::bad;
                }
            } else if (std::string(";,[](){}=+-*^/").find(char(c)) != std::string::npos) {
                t.kind = Tok::punct;
                t.text = std::string(1, take());
            } else if (auto u = unicode_alias()) {
                out.insert(out.end(), u->begin(), u->end());
                continue;
            } else {
                std::string bad;
                bad += take();
                while (i_ < s_.size() && (static_cast<unsigned char>(s_[i_]) & 0xC0) == 0x80) bad += take();
                errs.push_back({t.loc, "unexpected character '" + bad + "'", {}});
                t.kind = Tok::bad;
                t.text = bad;
            }
            out.push_back(t);
        }
    }

private:
    Loc loc() const { return {line_, col_}; }

    char take()
    {
        char c = s_[i_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
            ++col_;
        }
        return c;
    }

    void skip_space()
    {
        while (i_ < s_.size()) {
            char c = s_[i_];
            if (c == '#' || (c == '/' && i_ + 1 < s_.size() && s_[i_ + 1] == '/')) {
                while (i_ < s_.size() && s_[i_] != '\n') take();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                take();
            } else {
                return;
            }
        }
    }

    // Psi[1], g[a1]: an index glued to the name
    void index_suffix(std::string& name)
    {
        if (i_ >= s_.size() || s_[i_] != '[') return;
        std::size_t j = i_ + 1;
        while (j < s_.size() && ident_char(static_cast<unsigned char>(s_[j]))) ++j;
        if (j == i_ + 1 || j >= s_.size() || s_[j] != ']') return;
        while (i_ <= j) name += take();
    }

    // χ λ Λ → chi lam lam; ² ³ → ^2 ^3
    std::optional<std::vector<Token>> unicode_alias()
    {
        static const std::vector<std::pair<std::string, std::vector<std::string>>> table = {
            {"\xCF\x87", {"chi"}}, {"\xCE\xBB", {"lam"}}, {"\xCE\x9B", {"lam"}},
            {"\xC2\xB2", {"^", "2"}}, {"\xC2\xB3", {"^", "3"}}};
        for (auto& [u, toks] : table) {
            if (s_.compare(i_, u.size(), u) != 0) continue;
            Loc l = loc();
            for (std::size_t k = 0; k < u.size(); ++k) take();
            std::vector<Token> r;
            for (auto& t : toks) {
                Token tk;
                tk.loc = l;
                tk.text = t;
                tk.kind = std::isdigit(static_cast<unsigned char>(t[0])) ? Tok::integer
                          : t == "^"                                      ? Tok::punct
                                                                          : Tok::ident;
                r.push_back(tk);
            }
            return r;
        }
        return std::nullopt;
    }

    const std::string& s_;
    std::size_t i_ = 0;
    int line_ = 1, col_ = 1;
};

struct SyntaxError {
    Diagnostic d;
};

class Parser {
public:
    explicit Parser(std::vector<Token> t) : t_(std::move(t)) {}

    Script script(std::vector<Diagnostic>& errs)
    {
        Script s;
        while (!at_end()) {
            try {
                s.stmts.push_back(statement());
            } catch (SyntaxError& e) {
                errs.push_back(e.d);
                depth_ = 0;
                if (errs.size() >= 20) break;
                recover();
            }
        }
        return s;
    }

    Expr whole_expr()
    {
        Expr e = expr();
        if (!at_end()) fail("unexpected '" + cur().text + "' after expression", {"end of input"});
        return e;
    }

private:
    const Token& cur() const { return t_[p_]; }
    bool at_end() const { return cur().kind == Tok::end; }
    bool is(const char* punct) const { return cur().kind == Tok::punct && cur().text == punct; }
    bool is_word(const char* w) const { return cur().kind == Tok::ident && cur().text == w; }
    Token advance() { return t_[p_ < t_.size() - 1 ? p_++ : p_]; }

    [[noreturn]] void fail(const std::string& msg, std::vector<std::string> expected = {})
    {
        throw SyntaxError{{cur().loc, msg, std::move(expected)}};
    }
    std::string found() const
    {
        if (at_end()) return "end of input";
        if (cur().kind == Tok::string) return "string";
        return "'" + cur().text + "'";
    }
    void expect(const char* punct)
    {
        if (!is(punct)) fail(std::string("expected '") + punct + "', found " + found(), {punct});
        advance();
    }
    Token name(const char* what)
    {
        if (cur().kind != Tok::ident || keywords.count(cur().text))
            fail(std::string("expected ") + what + ", found " + found(), {what});
        return advance();
    }

    void recover()
    {
        while (!at_end()) {
            if (is(";") || is("}")) {
                advance();
                return;
            }
            advance();
        }
    }

    Stmt statement()
    {
        Stmt s;
        s.loc = cur().loc;
        if (cur().kind != Tok::ident)
            fail("expected a statement, found " + found(),
                 {"coeff", "deriv", "gen", "bracket", "relationpack", "field", "patch", "check"});
        std::string kw = cur().text;
        if (kw == "coeff") {
            advance();
            s.kind = Stmt::Kind::coeff;
            do {
                Token n = name("coefficient name");
                s.names.push_back(n.text);
                s.name_locs.push_back(n.loc);
            } while (is(",") && (advance(), true));
        } else if (kw == "gen") {
            advance();
            s.kind = Stmt::Kind::gen;
            Token n = name("generator name");
            s.names.push_back(n.text);
            s.name_locs.push_back(n.loc);
            if (is_word("even")) s.parity = Parity::even;
            else if (is_word("odd")) s.parity = Parity::odd;
            else if (is_word("function")) s.parity = Parity::function;
            else fail("expected parity, found " + found(), {"even", "odd", "function"});
            advance();
            if (is_word("weight")) {
                advance();
                s.weight = rational();
            }
        } else if (kw == "deriv") {
            advance();
            s.kind = Stmt::Kind::deriv;
            Token g = name("generator name");
            expect("(");
            Token f = name("function name");
            expect(")");
            s.names = {g.text, f.text};
            s.name_locs = {g.loc, f.loc};
            expect("=");
            s.exprs.push_back(expr());
        } else if (kw == "bracket") {
            advance();
            s.kind = Stmt::Kind::bracket;
            expect("[");
            Token a = name("generator name");
            expect(",");
            Token b = name("generator name");
            expect("]");
            s.names = {a.text, b.text};
            s.name_locs = {a.loc, b.loc};
            expect("=");
            s.exprs.push_back(expr());
        } else if (kw == "relationpack") {
            advance();
            s.kind = Stmt::Kind::relationpack;
            Token n = name("relation pack name");
            s.names.push_back(n.text);
            s.name_locs.push_back(n.loc);
            expect("{");
            while (!is("}")) {
                if (at_end()) fail("unterminated relation pack", {"}"});
                Token lhs = name("coefficient name");
                expect("=");
                s.relations.emplace_back(lhs.text, expr());
                s.relation_locs.push_back(lhs.loc);
                expect(";");
            }
            advance();
            return s; // no trailing ';'
        } else if (kw == "field") {
            advance();
            s.kind = Stmt::Kind::field;
            Token n = name("field name");
            s.names.push_back(n.text);
            s.name_locs.push_back(n.loc);
            expect("=");
            s.exprs.push_back(expr());
        } else if (kw == "patch") {
            advance();
            s.kind = Stmt::Kind::patch;
            Token n = name("patch name");
            s.names.push_back(n.text);
            s.name_locs.push_back(n.loc);
            if (cur().kind != Tok::string) fail("expected a quoted file name, found " + found(), {"string"});
            s.path = advance().text;
        } else if (kw == "check") {
            advance();
            s.kind = Stmt::Kind::check;
            Token n = name("check kind");
            s.names.push_back(n.text);
            s.name_locs.push_back(n.loc);
            expect("(");
            if (!is(")")) {
                s.exprs.push_back(expr());
                while (is(",")) {
                    advance();
                    s.exprs.push_back(expr());
                }
            }
            expect(")");
        } else {
            fail("unknown statement '" + kw + "'",
                 {"coeff", "deriv", "gen", "bracket", "relationpack", "field", "patch", "check"});
        }
        expect(";");
        return s;
    }

    Q rational()
    {
        if (cur().kind != Tok::integer) fail("expected a number, found " + found(), {"number"});
        Q q(advance().text);
        if (is("/")) {
            advance();
            if (cur().kind != Tok::integer) fail("expected a denominator, found " + found(), {"number"});
            Q d(advance().text);
            if (d == 0) fail("zero denominator");
            q /= d;
        }
        q.canonicalize();
        return q;
    }

    unsigned small_power()
    {
        expect("^");
        if (cur().kind != Tok::integer || cur().text.size() > 4) fail("expected an exponent, found " + found(), {"number"});
        return unsigned(std::stoul(advance().text));
    }

    bool starts_factor() const
    {
        if (cur().kind == Tok::integer) return true;
        if (cur().kind == Tok::ident) {
            const std::string& w = cur().text;
            return !keywords.count(w) || w == "lam" || w == "chi" || w == "S" || w == "T" || w == "i";
        }
        return is("(") || is("[");
    }

    Expr expr()
    {
        Depth guard(*this);
        Loc l = cur().loc;
        std::vector<Expr> terms;
        bool neg = false;
        if (is("-")) {
            advance();
            neg = true;
        }
        auto push = [&](bool negative) {
            Expr t = term();
            if (negative) {
                Expr n;
                n.kind = Expr::Kind::neg;
                n.loc = t.loc;
                n.kids.push_back(std::move(t));
                terms.push_back(std::move(n));
            } else {
                terms.push_back(std::move(t));
            }
        };
        push(neg);
        while (is("+") || is("-")) {
            bool m = advance().text == "-";
            push(m);
        }
        if (terms.size() == 1 && !neg) return terms[0];
        Expr s;
        s.kind = Expr::Kind::sum;
        s.loc = l;
        s.kids = std::move(terms);
        return s;
    }

    Expr term()
    {
        Loc l = cur().loc;
        std::vector<Expr> f;
        f.push_back(factor());
        while (true) {
            if (is("*")) {
                advance();
                f.push_back(factor());
            } else if (starts_factor()) {
                f.push_back(factor());
            } else {
                break;
            }
        }
        if (f.size() == 1) return f[0];
        Expr p;
        p.kind = Expr::Kind::prod;
        p.loc = l;
        p.kids = std::move(f);
        return p;
    }

    Expr factor()
    {
        Depth guard(*this);
        Expr e;
        e.loc = cur().loc;
        if (is_word("S")) {
            advance();
            e.kind = Expr::Kind::op_s;
            e.kids.push_back(factor());
            return e;
        }
        if (is_word("T")) {
            advance();
            e.kind = Expr::Kind::op_t;
            if (is("^")) e.power = small_power();
            e.kids.push_back(factor());
            return e;
        }
        return primary();
    }

    Expr primary()
    {
        Expr e;
        e.loc = cur().loc;
        if (cur().kind == Tok::integer) {
            e.kind = Expr::Kind::number;
            e.num = rational();
            return e;
        }
        if (is("(")) {
            advance();
            Expr in = expr();
            expect(")");
            return in;
        }
        if (is("[")) {
            advance();
            e.kind = Expr::Kind::bracket;
            e.kids.push_back(expr());
            expect(",");
            e.kids.push_back(expr());
            expect("]");
            return e;
        }
        if (cur().kind == Tok::ident) {
            const std::string w = cur().text;
            if (w == "i") {
                advance();
                e.kind = Expr::Kind::imag;
                return e;
            }
            if (w == "lam") {
                advance();
                e.kind = Expr::Kind::lam;
                if (is("^")) e.power = small_power();
                return e;
            }
            if (w == "chi") {
                advance();
                e.kind = Expr::Kind::chi;
                return e;
            }
            if (!keywords.count(w)) {
                advance();
                e.kind = Expr::Kind::ident;
                e.name = w;
                return e;
            }
        }
        fail("expected an expression, found " + found(), {"number", "name", "(", "[", "lam", "chi", "S", "T", "i"});
    }

    struct Depth {
        int& d;
        Depth(Parser& p) : d(p.depth_)
        {
            if (++d > 256) p.fail("expression nested too deeply");
        }
        ~Depth() { --d; }
    };

    std::vector<Token> t_;
    std::size_t p_ = 0;
    int depth_ = 0;
};

// ---------------------------------------------------------------- rendering

std::string render_q(const Q& q) { return q.get_str(); }

bool needs_parens_in_prod(const Expr& e)
{
    return e.kind == Expr::Kind::sum || e.kind == Expr::Kind::prod || e.kind == Expr::Kind::neg;
}

std::string render_factor(const Expr& e)
{
    return needs_parens_in_prod(e) ? "(" + render(e) + ")" : render(e);
}

} // namespace

bool is_keyword(const std::string& w) { return keywords.count(w) != 0; }

std::string render(const Expr& e)
{
    switch (e.kind) {
    case Expr::Kind::number:
        return render_q(e.num);
    case Expr::Kind::imag:
        return "i";
    case Expr::Kind::ident:
        return e.name;
    case Expr::Kind::lam:
        return e.power == 1 ? "lam" : "lam^" + std::to_string(e.power);
    case Expr::Kind::chi:
        return "chi";
    case Expr::Kind::neg:
        return "-" + render_factor(e.kids[0]);
    case Expr::Kind::sum: {
        std::string s;
        for (std::size_t k = 0; k < e.kids.size(); ++k) {
            const Expr& t = e.kids[k];
            bool neg = t.kind == Expr::Kind::neg;
            const Expr& body = neg ? t.kids[0] : t;
            std::string b = body.kind == Expr::Kind::sum || body.kind == Expr::Kind::neg ? "(" + render(body) + ")"
                                                                                         : render(body);
            if (k == 0) s += (neg ? "-" : "") + b;
            else s += (neg ? " - " : " + ") + b;
        }
        return s;
    }
    case Expr::Kind::prod: {
        std::string s;
        for (std::size_t k = 0; k < e.kids.size(); ++k) {
            if (k) s += " * ";
            s += render_factor(e.kids[k]);
        }
        return s;
    }
    case Expr::Kind::op_s:
        return "S " + render_factor(e.kids[0]);
    case Expr::Kind::op_t:
        return (e.power == 1 ? std::string("T ") : "T^" + std::to_string(e.power) + " ") + render_factor(e.kids[0]);
    case Expr::Kind::bracket:
        return "[" + render(e.kids[0]) + ", " + render(e.kids[1]) + "]";
    }
    return "";
}

std::string render(const Stmt& s)
{
    std::ostringstream os;
    switch (s.kind) {
    case Stmt::Kind::coeff:
        os << "coeff ";
        for (std::size_t k = 0; k < s.names.size(); ++k) os << (k ? ", " : "") << s.names[k];
        os << ";";
        break;
    case Stmt::Kind::gen:
        os << "gen " << s.names[0] << " "
           << (s.parity == Parity::even ? "even" : s.parity == Parity::odd ? "odd" : "function");
        if (s.weight) os << " weight " << render_q(*s.weight);
        os << ";";
        break;
    case Stmt::Kind::deriv:
        os << "deriv " << s.names[0] << "(" << s.names[1] << ") = " << render(s.exprs[0]) << ";";
        break;
    case Stmt::Kind::bracket:
        os << "bracket [" << s.names[0] << ", " << s.names[1] << "] = " << render(s.exprs[0]) << ";";
        break;
    case Stmt::Kind::relationpack:
        os << "relationpack " << s.names[0] << " {\n";
        for (auto& [lhs, rhs] : s.relations) os << "    " << lhs << " = " << render(rhs) << ";\n";
        os << "}";
        break;
    case Stmt::Kind::field:
        os << "field " << s.names[0] << " = " << render(s.exprs[0]) << ";";
        break;
    case Stmt::Kind::patch: {
        os << "patch " << s.names[0] << " \"";
        for (char c : s.path) {
            if (c == '"' || c == '\\') os << '\\';
            os << c;
        }
        os << "\";";
        break;
    }
    case Stmt::Kind::check:
        os << "check " << s.names[0] << "(";
        for (std::size_t k = 0; k < s.exprs.size(); ++k) os << (k ? ", " : "") << render(s.exprs[k]);
        os << ");";
        break;
    }
    return os.str();
}

std::string render(const Script& s)
{
    std::string out;
    for (auto& st : s.stmts) out += render(st) + "\n";
    return out;
}

bool same_expr(const Expr& a, const Expr& b)
{
    if (a.kind != b.kind || a.kids.size() != b.kids.size()) return false;
    switch (a.kind) {
    case Expr::Kind::number:
        if (a.num != b.num) return false;
        break;
    case Expr::Kind::ident:
        if (a.name != b.name) return false;
        break;
    case Expr::Kind::lam:
    case Expr::Kind::op_t:
        if (a.power != b.power) return false;
        break;
    default:
        break;
    }
    for (std::size_t k = 0; k < a.kids.size(); ++k)
        if (!same_expr(a.kids[k], b.kids[k])) return false;
    return true;
}

bool same_stmt(const Stmt& a, const Stmt& b)
{
    if (a.kind != b.kind || a.names != b.names || a.parity != b.parity || a.weight != b.weight || a.path != b.path)
        return false;
    if (a.exprs.size() != b.exprs.size() || a.relations.size() != b.relations.size()) return false;
    for (std::size_t k = 0; k < a.exprs.size(); ++k)
        if (!same_expr(a.exprs[k], b.exprs[k])) return false;
    for (std::size_t k = 0; k < a.relations.size(); ++k)
        if (a.relations[k].first != b.relations[k].first || !same_expr(a.relations[k].second, b.relations[k].second))
            return false;
    return true;
}

bool same_script(const Script& a, const Script& b)
{
    if (a.stmts.size() != b.stmts.size()) return false;
    for (std::size_t k = 0; k < a.stmts.size(); ++k)
        if (!same_stmt(a.stmts[k], b.stmts[k])) return false;
    return true;
}

std::string Diagnostic::render(const std::string& source, const std::string& file) const
{
    std::ostringstream os;
    os << file << ":" << loc.line << ":" << loc.col << ": error: " << message;
    if (!expected.empty()) {
        os << " (expected ";
        for (std::size_t k = 0; k < expected.size(); ++k) os << (k ? ", " : "") << expected[k];
        os << ")";
    }
    os << "\n";
    std::istringstream in(source);
    std::string line;
    for (int k = 0; k < loc.line && std::getline(in, line); ++k) {
    }
    if (loc.line >= 1) {
        os << "  " << line << "\n  ";
        // caret under the column, counted in code points
        int col = 1;
        for (std::size_t k = 0; k < line.size() && col < loc.col; ++k) {
            if ((static_cast<unsigned char>(line[k]) & 0xC0) == 0x80) continue;
            os << (line[k] == '\t' ? '\t' : ' ');
            ++col;
        }
        os << "^\n";
    }
    return os.str();
}

ParseResult parse(const std::string& text)
{
    ParseResult r;
    try {
        Lexer lx(text);
        auto toks = lx.run(r.errors);
        if (!r.errors.empty()) return r;
        Parser p(std::move(toks));
        Script s = p.script(r.errors);
        if (r.errors.empty()) r.script = std::move(s);
    } catch (const std::exception& e) {
        r.errors.push_back({{1, 1}, std::string("internal parser error: ") + e.what(), {}});
    }
    return r;
}

ParseResult parse_expr(const std::string& text, Expr& out)
{
    ParseResult r;
    try {
        Lexer lx(text);
        auto toks = lx.run(r.errors);
        if (!r.errors.empty()) return r;
        Parser p(std::move(toks));
        out = p.whole_expr();
        r.script = Script{};
    } catch (SyntaxError& e) {
        r.errors.push_back(e.d);
    } catch (const std::exception& e) {
        r.errors.push_back({{1, 1}, std::string("internal parser error: ") + e.what(), {}});
    }
    return r;
}

// ---------------------------------------------------------------- name resolution

namespace {

enum class NameKind { coeff, gen, function, field, patch, pack };

struct Scope {
    std::map<std::string, std::pair<NameKind, Loc>> names;
    std::vector<Diagnostic>& errs;

    void define(const std::string& n, NameKind k, Loc l)
    {
        if (is_keyword(n)) {
            errs.push_back({l, "'" + n + "' is a reserved word", {}});
            return;
        }
        auto it = names.find(n);
        if (it != names.end()) {
            std::ostringstream os;
            os << "redefinition of '" << n << "' (first defined at line " << it->second.second.line << ")";
            errs.push_back({l, os.str(), {}});
            return;
        }
        names[n] = {k, l};
    }

    std::optional<NameKind> kind(const std::string& n) const
    {
        auto it = names.find(n);
        if (it == names.end()) return std::nullopt;
        return it->second.first;
    }

    void use(const Expr& e, const std::set<NameKind>& allowed, const char* ctx)
    {
        if (e.kind == Expr::Kind::ident) {
            auto k = kind(e.name);
            if (!k) errs.push_back({e.loc, "unknown identifier '" + e.name + "'", {}});
            else if (!allowed.count(*k))
                errs.push_back({e.loc, "'" + e.name + "' cannot be used in " + ctx, {}});
        }
        for (auto& c : e.kids) use(c, allowed, ctx);
    }
};

} // namespace

std::vector<Diagnostic> resolve(const Script& s)
{
    std::vector<Diagnostic> errs;
    Scope sc{{}, errs};
    const std::set<NameKind> scalar = {NameKind::coeff, NameKind::function};
    const std::set<NameKind> fields = {NameKind::coeff, NameKind::function, NameKind::gen, NameKind::field};
    for (auto& st : s.stmts) {
        switch (st.kind) {
        case Stmt::Kind::coeff:
            for (std::size_t k = 0; k < st.names.size(); ++k) sc.define(st.names[k], NameKind::coeff, st.name_locs[k]);
            break;
        case Stmt::Kind::gen:
            sc.define(st.names[0], st.parity == Parity::function ? NameKind::function : NameKind::gen, st.name_locs[0]);
            break;
        case Stmt::Kind::deriv: {
            auto g = sc.kind(st.names[0]);
            if (!g) errs.push_back({st.name_locs[0], "unknown identifier '" + st.names[0] + "'", {}});
            else if (*g != NameKind::gen) errs.push_back({st.name_locs[0], "'" + st.names[0] + "' is not a generator", {}});
            auto f = sc.kind(st.names[1]);
            if (!f) errs.push_back({st.name_locs[1], "unknown identifier '" + st.names[1] + "'", {}});
            else if (*f != NameKind::function)
                errs.push_back({st.name_locs[1], "'" + st.names[1] + "' is not a function generator", {}});
            sc.use(st.exprs[0], scalar, "a derivative value");
            break;
        }
        case Stmt::Kind::bracket:
            for (int k = 0; k < 2; ++k) {
                auto g = sc.kind(st.names[std::size_t(k)]);
                if (!g) errs.push_back({st.name_locs[std::size_t(k)], "unknown identifier '" + st.names[std::size_t(k)] + "'", {}});
                else if (*g != NameKind::gen)
                    errs.push_back({st.name_locs[std::size_t(k)], "'" + st.names[std::size_t(k)] + "' is not an ordinary generator", {}});
            }
            sc.use(st.exprs[0], {NameKind::coeff, NameKind::function, NameKind::gen}, "a bracket value");
            break;
        case Stmt::Kind::relationpack:
            for (std::size_t k = 0; k < st.relations.size(); ++k) {
                auto c = sc.kind(st.relations[k].first);
                if (!c) errs.push_back({st.relation_locs[k], "unknown identifier '" + st.relations[k].first + "'", {}});
                else if (*c != NameKind::coeff)
                    errs.push_back({st.relation_locs[k], "'" + st.relations[k].first + "' is not a coefficient", {}});
                sc.use(st.relations[k].second, scalar, "a relation");
            }
            sc.define(st.names[0], NameKind::pack, st.name_locs[0]);
            break;
        case Stmt::Kind::field:
            sc.use(st.exprs[0], fields, "a field");
            sc.define(st.names[0], NameKind::field, st.name_locs[0]);
            break;
        case Stmt::Kind::patch:
            sc.define(st.names[0], NameKind::patch, st.name_locs[0]);
            break;
        case Stmt::Kind::check: {
            auto all = fields;
            all.insert(NameKind::patch);
            for (auto& e : st.exprs) sc.use(e, all, "a check");
            break;
        }
        }
    }
    return errs;
}

} // namespace lf::dsl
