#include "lf/script.hpp"

#include "lf/models.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace lf::dsl {

namespace {

bool scalar_like(const Br& b)
{
    for (auto& [m, s] : b.terms())
        for (auto& [mono, c] : s.terms())
            if (!mono.empty()) return false;
    return true;
}

ScalarHPoly to_scalar(const Br& b)
{
    ScalarHPoly r;
    for (auto& [m, s] : b.terms())
        for (auto& [mono, c] : s.terms()) r.add(m, c);
    return r;
}

bool lambda_free(const Br& b)
{
    for (auto& [m, s] : b.terms())
        if (!m.empty()) return false;
    return true;
}

Br vac(const CoeffExpr& c) { return Br::constant(State::vac(c)); }

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace

Interpreter::Interpreter(const Script& s, std::string base_dir) : script_(s), base_(std::move(base_dir))
{
    pres_.label = "script";
    for (auto& st : script_.stmts) {
        switch (st.kind) {
        case Stmt::Kind::coeff:
            for (auto& n : st.names) coeffs_.push_back(n);
            break;
        case Stmt::Kind::gen: {
            if (st.parity == Parity::function) {
                if (st.weight && *st.weight != 0) throw ScriptError(st.loc, "function generators have weight 0");
                pres_.add_function(st.names[0]);
                break;
            }
            Q w = st.weight ? *st.weight : (st.parity == Parity::odd ? Q(1, 2) : Q(0));
            Q w2 = 2 * w;
            if (w2.get_den() != 1 || w2 < 0 || w2 > 64)
                throw ScriptError(st.loc, "weight must be a half-integer between 0 and 32");
            pres_.add_generator(st.names[0], st.parity == Parity::odd, int(w2.get_num().get_si()));
            break;
        }
        case Stmt::Kind::deriv: {
            Br v = eval(st.exprs[0], Mode::scalar, nullptr);
            if (!lambda_free(v)) throw ScriptError(st.exprs[0].loc, "a derivative value cannot depend on lam, chi");
            pres_.set_anchor(pres_.index(st.names[0]), pres_.index(st.names[1]), to_scalar(v).at({}));
            break;
        }
        case Stmt::Kind::bracket: {
            auto a = pres_.index(st.names[0]), b = pres_.index(st.names[1]);
            if (pres_.bracket(a, b)) throw ScriptError(st.loc, "bracket [" + st.names[0] + ", " + st.names[1] + "] already given");
            Engine tmp(pres_);
            Br v = eval(st.exprs[0], Mode::field, &tmp);
            int pa = pres_.gen(a).odd, pb = pres_.gen(b).odd;
            for (auto& [m, x] : v.terms()) {
                int px = x.parity();
                // [a_Λ b] has parity a + b + 1; χ carries one unit
                if (px >= 0 && ((px + odd_degree(m)) & 1) != ((pa + pb + 1) & 1))
                    throw ScriptError(st.exprs[0].loc, "bracket value has the wrong parity");
            }
            pres_.set_bracket(a, b, v);
            break;
        }
        case Stmt::Kind::relationpack:
            for (auto& [lhs, rhs] : st.relations) {
                Br v = eval(rhs, Mode::scalar, nullptr);
                if (!lambda_free(v)) throw ScriptError(rhs.loc, "a relation cannot depend on lam, chi");
                pres_.add_rule(symbols::intern(lhs), to_scalar(v).at({}));
            }
            break;
        default:
            break;
        }
    }
    engine_ = std::make_unique<Engine>(pres_);
    for (auto& st : script_.stmts) {
        if (st.kind == Stmt::Kind::field) {
            fields_.emplace_back(st.names[0], eval_state(st.exprs[0]));
        } else if (st.kind == Stmt::Kind::patch) {
            std::filesystem::path p(st.path);
            if (p.is_relative()) p = std::filesystem::path(base_) / p;
            try {
                patches_.emplace_back(st.names[0], geo::parse_patch(read_file(p.string())));
            } catch (const std::exception& e) {
                throw ScriptError(st.loc, e.what());
            }
        }
    }
}

std::optional<State> Interpreter::field(const std::string& name) const
{
    for (auto& [n, s] : fields_)
        if (n == name) return s;
    return std::nullopt;
}

const geo::Patch* Interpreter::patch(const std::string& name) const
{
    for (auto& [n, p] : patches_)
        if (n == name) return &p;
    return nullptr;
}

Br Interpreter::eval(const Expr& e) { return eval(e, Mode::field, engine_.get()); }

State Interpreter::eval_state(const Expr& e)
{
    Br v = eval(e);
    if (!lambda_free(v)) throw ScriptError(e.loc, "expected a field, found an expression in lam, chi");
    return v.at({});
}

Gauss Interpreter::eval_number(const Expr& e)
{
    Br v = eval(e, Mode::scalar, nullptr);
    if (!lambda_free(v) || !scalar_like(v)) throw ScriptError(e.loc, "expected a number");
    CoeffExpr c = to_scalar(v).at({});
    if (!c.is_const()) throw ScriptError(e.loc, "expected a number, found symbols");
    return c.is_zero() ? Gauss(0) : c.const_value();
}

Br Interpreter::eval(const Expr& e, Mode mode, Engine* eng)
{
    auto need_engine = [&]() -> Engine& {
        if (!eng) throw ScriptError(e.loc, "fields cannot appear here");
        return *eng;
    };
    switch (e.kind) {
    case Expr::Kind::number:
        return vac(CoeffExpr(Gauss(e.num)));
    case Expr::Kind::imag:
        return vac(CoeffExpr(Gauss::I()));
    case Expr::Kind::lam:
        return Br::term(hmono(LAM, e.power, 0), State::vac());
    case Expr::Kind::chi:
        return Br::term(hmono(LAM, 0, 1), State::vac());
    case Expr::Kind::ident: {
        if (std::find(coeffs_.begin(), coeffs_.end(), e.name) != coeffs_.end())
            return vac(CoeffExpr::sym(e.name));
        const Presentation& p = eng ? eng->pres() : pres_;
        if (auto g = p.find(e.name)) {
            if (p.gen(*g).kind == GenKind::function && mode == Mode::scalar)
                return vac(CoeffExpr::sym(p.gen(*g).sym));
            if (mode == Mode::scalar) throw ScriptError(e.loc, "'" + e.name + "' is not a scalar");
            return Br::constant(p.state(e.name));
        }
        if (auto f = field(e.name)) {
            if (mode == Mode::scalar) throw ScriptError(e.loc, "'" + e.name + "' is not a scalar");
            return Br::constant(*f);
        }
        throw ScriptError(e.loc, "unknown identifier '" + e.name + "'");
    }
    case Expr::Kind::neg:
        return Br() - eval(e.kids[0], mode, eng);
    case Expr::Kind::sum: {
        Br r;
        for (auto& k : e.kids) r += eval(k, mode, eng);
        return r;
    }
    case Expr::Kind::prod: {
        // right-nested: a b c = a(bc)
        Br r = eval(e.kids.back(), mode, eng);
        for (std::size_t k = e.kids.size() - 1; k-- > 0;) {
            Br x = eval(e.kids[k], mode, eng);
            if (scalar_like(x)) {
                r = mul_left(to_scalar(x), r);
            } else if (scalar_like(r)) {
                r = mul_right(x, to_scalar(r));
            } else {
                if (!lambda_free(x) || !lambda_free(r))
                    throw ScriptError(e.kids[k].loc, "products of fields must not depend on lam, chi");
                r = Br::constant(need_engine().no(x.at({}), r.at({})));
            }
        }
        return r;
    }
    case Expr::Kind::op_s:
    case Expr::Kind::op_t: {
        Br x = eval(e.kids[0], mode, eng);
        if (!lambda_free(x)) throw ScriptError(e.loc, "S and T act on fields, not on lam, chi");
        if (scalar_like(x)) return Br(); // S and T kill the vacuum
        Engine& en = need_engine();
        State s = x.at({});
        return Br::constant(e.kind == Expr::Kind::op_s ? en.apply_S(s) : en.apply_T(s, e.power));
    }
    case Expr::Kind::bracket: {
        Br a = eval(e.kids[0], mode, eng), b = eval(e.kids[1], mode, eng);
        if (!lambda_free(a) || !lambda_free(b)) throw ScriptError(e.loc, "bracket arguments must be fields");
        return need_engine().bracket(a.at({}), b.at({}));
    }
    }
    throw ScriptError(e.loc, "unsupported expression");
}

std::optional<Gauss> Interpreter::n22_charge()
{
    for (auto& st : script_.stmts)
        if (st.kind == Stmt::Kind::check && st.names[0] == "n22" && st.exprs.size() == 1) return eval_number(st.exprs[0]);
    return std::nullopt;
}

suite::Report Interpreter::run_checks()
{
    suite::Report r;
    r.title = "script checks";
    auto t0 = std::chrono::steady_clock::now();
    for (auto& st : script_.stmts)
        if (st.kind == Stmt::Kind::check) check(st, r);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

void Interpreter::check(const Stmt& st, suite::Report& r)
{
    const std::string& kind = st.names[0];
    std::string label = dsl::render(st);
    auto args = [&](std::size_t n) {
        if (st.exprs.size() != n)
            throw ScriptError(st.loc, "check " + kind + " takes " + std::to_string(n) + " argument(s)");
    };
    auto zero = [&](const std::string& name, const Br& v) { r.add(name, v.is_zero(), v.is_zero() ? "0" : render(v)); };
    auto patch_arg = [&](const Expr& e) -> const geo::Patch& {
        if (e.kind != Expr::Kind::ident || !patch(e.name)) throw ScriptError(e.loc, "expected a patch name");
        return *patch(e.name);
    };
    Engine& eng = *engine_;
    if (kind == "zero") {
        args(1);
        zero(label, eval(st.exprs[0]));
    } else if (kind == "equal") {
        args(2);
        zero(label, eval(st.exprs[0]) - eval(st.exprs[1]));
    } else if (kind == "skew") {
        args(2);
        zero(label, eng.skew_residual(eval_state(st.exprs[0]), eval_state(st.exprs[1])));
    } else if (kind == "jacobi") {
        args(3);
        zero(label, eng.jacobi_residual(eval_state(st.exprs[0]), eval_state(st.exprs[1]), eval_state(st.exprs[2])));
    } else if (kind == "n22") {
        args(1);
        NamedFields nf;
        for (auto [name, dst] : {std::pair<const char*, State*>{"Jp", &nf.Jp}, {"Jm", &nf.Jm}, {"Hp", &nf.Hp}, {"Hm", &nf.Hm}}) {
            auto f = field(name);
            if (!f) throw ScriptError(st.loc, std::string("check n22 needs a field named ") + name);
            *dst = *f;
        }
        for (auto& res : verify_n22(eng, nf, eval_number(st.exprs[0]))) zero(label + " " + res.name, res.value);
    } else if (kind == "n2") {
        args(3);
        for (auto& res : verify_single_n2(eng, eval_state(st.exprs[0]), eval_state(st.exprs[1]), eval_number(st.exprs[2])))
            zero(label + " " + res.name, res.value);
    } else if (kind == "courant") {
        if (st.exprs.empty() || st.exprs.size() > 2) throw ScriptError(st.loc, "check courant takes a patch and optional trial count");
        const geo::Patch& p = patch_arg(st.exprs[0]);
        int trials = st.exprs.size() == 2 ? int(eval_number(st.exprs[1]).re.get_d()) : 50;
        auto rep = suite::courant(p.H, trials, 7);
        for (auto& c : rep.checks) r.add(label + " " + c.name, c.ok, c.detail);
    } else if (kind == "frames") {
        args(1);
        const geo::Patch& p = patch_arg(st.exprs[0]);
        if (!p.has_metric) throw ScriptError(st.loc, "patch has no metric");
        auto g = geo::bihermitian_to_gcs(p.data);
        r.add(label + " bihermitian", geo::check_bihermitian(p.data, g).ok());
        r.add(label + " frames", geo::check_frames(p.data, geo::frames(p.data), p.H).ok());
    } else {
        throw ScriptError(st.name_locs[0], "unknown check '" + kind +
                                               "' (zero, equal, skew, jacobi, n22, n2, courant, frames)");
    }
}

std::unique_ptr<Interpreter> load(const Script& s, const std::string& base_dir)
{
    auto errs = resolve(s);
    if (!errs.empty()) throw ScriptError(errs[0].loc, errs[0].message);
    return std::make_unique<Interpreter>(s, base_dir);
}

} // namespace lf::dsl
