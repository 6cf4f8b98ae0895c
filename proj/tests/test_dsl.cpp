#include "lf/dsl.hpp"
#include "lf/models.hpp"
#include "lf/script.hpp"

#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

using namespace lf;
using namespace lf::dsl;

namespace {

std::string slurp(const std::string& path)
{
    std::ifstream in(path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Script must_parse(const std::string& text)
{
    auto r = parse(text);
    INFO(text);
    REQUIRE(r.ok());
    return *r.script;
}

std::vector<Diagnostic> diagnostics(const std::string& text)
{
    auto r = parse(text);
    if (!r.ok()) return r.errors;
    return resolve(*r.script);
}

// random ASTs in the shape the parser produces
struct Gen {
    std::mt19937_64 rng;
    explicit Gen(std::uint64_t seed) : rng(seed) {}

    int pick(int n) { return int(rng() % std::uint64_t(n)); }

    std::string ident()
    {
        static const char* base[] = {"a", "b", "Psi", "B", "x_1", "Jp", "_t"};
        std::string s = base[pick(7)];
        if (pick(3) == 0) s += "[" + std::to_string(pick(5)) + "]";
        return s;
    }

    Q rational()
    {
        Q q(long(pick(40)), long(1 + pick(6)));
        q.canonicalize();
        return q;
    }

    Expr leaf()
    {
        Expr e;
        switch (pick(5)) {
        case 0:
            e.kind = Expr::Kind::number;
            e.num = rational();
            break;
        case 1:
            e.kind = Expr::Kind::imag;
            break;
        case 2:
            e.kind = Expr::Kind::lam;
            e.power = unsigned(1 + pick(3));
            break;
        case 3:
            e.kind = Expr::Kind::chi;
            break;
        default:
            e.kind = Expr::Kind::ident;
            e.name = ident();
        }
        return e;
    }

    Expr expr(int depth)
    {
        if (depth <= 0 || pick(3) == 0) return leaf();
        Expr e;
        switch (pick(5)) {
        case 0: { // sum; negations only as summands, never doubled
            e.kind = Expr::Kind::sum;
            int n = 1 + pick(3);
            for (int k = 0; k < n; ++k) {
                Expr t = expr(depth - 1);
                if (pick(2) == 0 || n == 1) {
                    Expr m;
                    m.kind = Expr::Kind::neg;
                    if (t.kind == Expr::Kind::neg) t = leaf();
                    m.kids.push_back(std::move(t));
                    t = std::move(m);
                } else if (t.kind == Expr::Kind::neg) {
                    t = leaf();
                }
                e.kids.push_back(std::move(t));
            }
            return e;
        }
        case 1:
            e.kind = Expr::Kind::prod;
            for (int k = 0, n = 2 + pick(2); k < n; ++k) e.kids.push_back(expr(depth - 1));
            return e;
        case 2:
            e.kind = Expr::Kind::op_s;
            e.kids.push_back(expr(depth - 1));
            return e;
        case 3:
            e.kind = Expr::Kind::op_t;
            e.power = unsigned(1 + pick(2));
            e.kids.push_back(expr(depth - 1));
            return e;
        default:
            e.kind = Expr::Kind::bracket;
            e.kids.push_back(expr(depth - 1));
            e.kids.push_back(expr(depth - 1));
            return e;
        }
    }

    Stmt stmt()
    {
        Stmt s;
        switch (pick(8)) {
        case 0:
            s.kind = Stmt::Kind::coeff;
            for (int k = 0, n = 1 + pick(3); k < n; ++k) s.names.push_back(ident());
            break;
        case 1:
            s.kind = Stmt::Kind::gen;
            s.names = {ident()};
            s.parity = Parity(pick(3));
            if (pick(2)) s.weight = rational();
            break;
        case 2:
            s.kind = Stmt::Kind::deriv;
            s.names = {ident(), ident()};
            s.exprs = {expr(3)};
            break;
        case 3:
            s.kind = Stmt::Kind::bracket;
            s.names = {ident(), ident()};
            s.exprs = {expr(3)};
            break;
        case 4:
            s.kind = Stmt::Kind::relationpack;
            s.names = {ident()};
            for (int k = 0, n = pick(3); k < n; ++k) s.relations.emplace_back(ident(), expr(2));
            break;
        case 5:
            s.kind = Stmt::Kind::field;
            s.names = {ident()};
            s.exprs = {expr(4)};
            break;
        case 6:
            s.kind = Stmt::Kind::patch;
            s.names = {ident()};
            s.path = pick(2) ? "dir/p.txt" : "we\"ird\\name";
            break;
        default:
            s.kind = Stmt::Kind::check;
            s.names = {ident()};
            for (int k = 0, n = pick(3); k < n; ++k) s.exprs.push_back(expr(2));
        }
        return s;
    }
};

const char* two_gen = "gen Psi[1] odd; gen B[1] even; bracket [Psi[1], B[1]] = 1;";

} // namespace

TEST_CASE("two-generator presentation")
{
    Script s = must_parse(two_gen);
    REQUIRE(s.stmts.size() == 3);
    CHECK(s.stmts[0].kind == Stmt::Kind::gen);
    CHECK(s.stmts[0].parity == Parity::odd);
    CHECK(s.stmts[2].kind == Stmt::Kind::bracket);
    CHECK(resolve(s).empty());

    Interpreter in(s);
    CHECK(in.pres().size() == 2);
    auto& p = in.pres();
    Br b = in.engine().bracket(p.state("Psi[1]"), p.state("B[1]"));
    CHECK(b == Br::constant(State::vac()));
    CHECK(in.engine().bracket(p.state("B[1]"), p.state("Psi[1]")) == Br::constant(State::vac()));

    Expr e;
    REQUIRE(parse_expr("[Psi[1], B[1]] - 1", e).errors.empty());
    CHECK(in.eval(e).is_zero());
}

TEST_CASE("malformed bracket points at the offending token")
{
    std::string src = "gen Psi[1] odd;\ngen B[1] even;\nbracket [Psi[1] B[1]] = 1;\n";
    auto r = parse(src);
    REQUIRE_FALSE(r.ok());
    const Diagnostic& d = r.errors.at(0);
    CHECK(d.loc.line == 3);
    CHECK(d.loc.col == 17);
    CHECK(std::find(d.expected.begin(), d.expected.end(), ",") != d.expected.end());
    std::string out = d.render(src, "m.lf");
    CHECK(out.rfind("m.lf:3:17: error:", 0) == 0);
    CHECK(out.find("bracket [Psi[1] B[1]] = 1;\n") != std::string::npos);
    CHECK(out.find("\n" + std::string(2 + 16, ' ') + "^") != std::string::npos);
}

TEST_CASE("error recovery reports several statements")
{
    auto r = parse("gen a odd\ngen b even;\nfield x = (a + ;\nfield y = b;\n");
    REQUIRE_FALSE(r.ok());
    CHECK(r.errors.size() >= 2);
    CHECK(r.errors[0].loc.line == 2);
}

TEST_CASE("unknown identifiers and redefinitions")
{
    auto d = diagnostics("gen a odd; field x = a * b;");
    REQUIRE(d.size() == 1);
    CHECK(d[0].message.find("'b'") != std::string::npos);
    CHECK(d[0].loc.col == 26);

    d = diagnostics("field x = a; gen a odd;");
    REQUIRE_FALSE(d.empty());
    CHECK(d[0].message.find("'a'") != std::string::npos);

    d = diagnostics("gen a odd;\ngen a even;");
    REQUIRE(d.size() == 1);
    CHECK(d[0].loc.line == 2);
    CHECK(d[0].message.find("line 1") != std::string::npos);

    d = diagnostics("coeff c; field c = 1;");
    REQUIRE(d.size() == 1);

    CHECK(!parse("gen lam odd;").ok());
    CHECK(!parse("field S = 1;").ok());
}

TEST_CASE("unicode aliases")
{
    Expr a, b;
    REQUIRE(parse_expr("λ² χ + Λ³ - χ", a).errors.empty());
    REQUIRE(parse_expr("lam^2 chi + lam^3 - chi", b).errors.empty());
    CHECK(same_expr(a, b));
    auto r = parse("field x = 1 ☃ 2;");
    REQUIRE_FALSE(r.ok());
    CHECK(r.errors[0].loc.col == 13);
    CHECK(r.errors[0].message.find("unexpected character") != std::string::npos);
}

TEST_CASE("comments and Gaussian numbers")
{
    Script s = must_parse("# header\ncoeff k; // trailing\nfield z = 1/2 + 3/4 * i;\ncheck zero(z - 1/2 - 3/4 i);\n");
    Interpreter in(s);
    auto rep = in.run_checks();
    REQUIRE(rep.checks.size() == 1);
    CHECK(rep.checks[0].ok);
    Expr e;
    REQUIRE(parse_expr("(1/2 + 3/4 i) * 4", e).errors.empty());
    CHECK(in.eval_number(e) == Gauss(Q(2), Q(3)));
}

TEST_CASE("render and reparse give the same tree")
{
    Gen g(12345);
    for (int trial = 0; trial < 500; ++trial) {
        Script s;
        for (int k = 0, n = 1 + g.pick(6); k < n; ++k) s.stmts.push_back(g.stmt());
        std::string text = render(s);
        auto r = parse(text);
        INFO(text);
        REQUIRE(r.ok());
        CHECK(same_script(s, *r.script));
        CHECK(render(*r.script) == text);
    }
}

TEST_CASE("parser is total on random bytes and mutated scripts")
{
    std::mt19937_64 rng(99);
    std::string base = slurp(LF_SCRIPTS_DIR "/flat_cy_n1.lf");
    REQUIRE_FALSE(base.empty());
    const std::string alphabet = "ab S T lam chi [](){};,=+-*/^ 0123456789#\"\n\tgen odd field check bracket relationpack";
    for (int trial = 0; trial < 2000; ++trial) {
        std::string s;
        switch (trial % 3) {
        case 0:
            for (int k = 0, n = int(rng() % 200); k < n; ++k) s += char(rng() % 256);
            break;
        case 1:
            for (int k = 0, n = int(rng() % 200); k < n; ++k) s += alphabet[rng() % alphabet.size()];
            break;
        default:
            s = base;
            for (int k = 0, n = 1 + int(rng() % 8); k < n; ++k) {
                std::size_t at = rng() % (s.size() + 1);
                switch (rng() % 3) {
                case 0:
                    if (at < s.size()) s.erase(at, 1 + rng() % 5);
                    break;
                case 1:
                    s.insert(at, 1, alphabet[rng() % alphabet.size()]);
                    break;
                default:
                    if (at < s.size()) s[at] = char(rng() % 256);
                }
            }
        }
        ParseResult r;
        CHECK_NOTHROW(r = parse(s));
        CHECK((r.ok() || !r.errors.empty()));
        if (r.ok()) CHECK_NOTHROW(resolve(*r.script));
        for (auto& d : r.errors) CHECK_NOTHROW(d.render(s));
    }
    std::string deep(5000, '(');
    auto r = parse("field x = " + deep + "1;");
    CHECK_FALSE(r.ok());
}

TEST_CASE("bundled flat script reproduces the N=2,2 relations")
{
    std::string src = slurp(LF_SCRIPTS_DIR "/flat_cy_n1.lf");
    Script s = must_parse(src);
    CHECK(resolve(s).empty());
    Interpreter in(s, LF_SCRIPTS_DIR);
    auto c = in.n22_charge();
    REQUIRE(c);
    CHECK(*c == Gauss(3));
    auto rep = in.run_checks();
    CHECK(rep.checks.size() == 12);
    CHECK(rep.ok());

    // the script's fields agree with the library model
    Engine ref(free_sigma_model(1));
    auto nf = build_fields(ref, free_frames(ref));
    CHECK(render_state(ref.pres(), *in.field("Jp")) == render_state(ref.pres(), nf.Jp));
    CHECK(render_state(ref.pres(), *in.field("Hm")) == render_state(ref.pres(), nf.Hm));

    Expr e;
    REQUIRE(parse_expr("[Jp, Jp] + Hp + lam chi", e).errors.empty());
    CHECK(in.eval(e).is_zero());
}

TEST_CASE("interpreter errors carry locations")
{
    auto run = [](const std::string& src) -> std::optional<ScriptError> {
        Script s = must_parse(src);
        try {
            Interpreter in(s);
            in.run_checks();
        } catch (const ScriptError& e) {
            return e;
        }
        return std::nullopt;
    };
    auto e = run("gen a odd;\ngen b odd;\nbracket [a, b] = 1;\n");
    REQUIRE(e);
    CHECK(e->loc.line == 3);
    e = run("gen a odd;\ngen b even;\nbracket [a, b] = 1;\nbracket [a, b] = 0;\n");
    REQUIRE(e);
    CHECK(e->loc.line == 4);
    e = run("gen a even;\nbracket [a, a] = 1;\n"); // parity mismatch
    REQUIRE(e);
    CHECK(e->loc.line == 2);
    e = run("gen a even;\nfield x = lam a;\ncheck zero(x);\n");
    REQUIRE(e);
    CHECK(e->loc.line == 2);
    CHECK_FALSE(run("gen a odd weight 1/2;\ngen b even;\nbracket [a, b] = 1;\nfield x = a * b;\ncheck skew(x, a);\n"));
}

TEST_CASE("checks that should fail do fail")
{
    Script s = must_parse("gen a odd weight 1/2;\ngen b even;\nbracket [a, b] = 1;\n"
                          "check zero([a, b]);\ncheck equal(a, b);\ncheck skew(a, b);\ncheck jacobi(a, b, a * b);\n");
    Interpreter in(s);
    auto rep = in.run_checks();
    REQUIRE(rep.checks.size() == 4);
    CHECK_FALSE(rep.checks[0].ok);
    CHECK_FALSE(rep.checks[1].ok);
    CHECK(rep.checks[2].ok);
    CHECK(rep.checks[3].ok);
}
