#include "lf/engine.hpp"

#include <stdexcept>

namespace lf {

namespace {

constexpr std::uint32_t SEP = 0xFFFFFFFFu;

std::vector<std::uint32_t> key2(const Monomial& u, const Monomial& v)
{
    std::vector<std::uint32_t> k;
    k.reserve(u.size() + v.size() + 1);
    k.insert(k.end(), u.begin(), u.end());
    k.push_back(SEP);
    k.insert(k.end(), v.begin(), v.end());
    return k;
}

Monomial tail(const Monomial& m) { return Monomial(m.begin() + 1, m.end()); }

CoeffExpr sgn(bool neg) { return CoeffExpr(neg ? -1 : 1); }

struct DepthGuard {
    int& d;
    explicit DepthGuard(int& x) : d(x)
    {
        if (++d > 4000) throw std::runtime_error("bracket recursion too deep");
    }
    ~DepthGuard() { --d; }
};

} // namespace

ScalarHPoly lam_chi(LambdaVar v, std::uint32_t j, std::uint32_t J, const CoeffExpr& c)
{
    return ScalarHPoly::term(hmono(v, j, J), c);
}

Engine::Engine(Presentation p) : p_(std::move(p)) {}

void Engine::clear_caches()
{
    br_memo_.clear();
    no_memo_.clear();
    ins_memo_.clear();
    base_memo_.clear();
}

State Engine::simplify(const State& s) const
{
    if (p_.rules().empty()) return s;
    return s.map_coeffs([&](const CoeffExpr& c) { return p_.simplify(c); });
}

// ---------------------------------------------------------------- canonical forms

State Engine::insert(Letter x, const Monomial& v)
{
    if (v.empty()) return State::mono({x});
    Letter y = v[0];
    if (x < y || (x == y && !letter_odd(x))) {
        Monomial m;
        m.reserve(v.size() + 1);
        m.push_back(x);
        m.insert(m.end(), v.begin(), v.end());
        return State::mono(m);
    }
    auto key = key2({x}, v);
    if (auto it = ins_memo_.find(key); it != ins_memo_.end()) return it->second;
    DepthGuard g(depth_);
    Monomial V = tail(v);
    State r;
    if (x == y) {
        fire("swap-odd-square");
        r = corr(x, x, V).scaled(CoeffExpr(Gauss::frac(1, 2)));
    } else {
        fire("swap");
        bool neg = letter_odd(x) && letter_odd(y);
        State w = insert(x, V);
        for (auto& [m, c] : w.terms()) r += insert(y, m).scaled(neg ? -c : c);
        r += corr(x, y, V);
    }
    r = simplify(r);
    ins_memo_.emplace(std::move(key), r);
    return r;
}

State Engine::insert(Letter x, const State& v)
{
    State r;
    for (auto& [m, c] : v.terms()) r += insert(x, m).scaled(c);
    return r;
}

// x(yV) − (−1)^{xy} y(xV) = Σ_j (−1)^j/(j+1)! (T^{j+1} x_{(j)}y) V
State Engine::corr(Letter x, Letter y, const Monomial& V)
{
    State r;
    Br a = bracket_letters(x, y);
    for (auto& [m, c] : a.terms()) {
        if (odd_degree(m) != 1) continue;
        std::uint32_t j = even_power(m, LAM);
        State t = apply_T(c, j + 1);
        Gauss k(Q(1, long(j) + 1));
        if (j & 1) k = -k;
        r += no(t, State::mono(V)).scaled(CoeffExpr(k));
    }
    return r;
}

State Engine::chain(const std::vector<Letter>& letters)
{
    if (letters.empty()) return State::vac();
    State r = State::mono({letters.back()});
    for (std::size_t i = letters.size() - 1; i-- > 0;) r = insert(letters[i], r);
    return r;
}

State Engine::no(const State& a, const State& b)
{
    State r;
    for (auto& [u, cu] : a.terms())
        for (auto& [v, cv] : b.terms()) r += no_mono(u, v).scaled(cu * cv);
    return simplify(r);
}

State Engine::no_mono(const Monomial& u, const Monomial& v)
{
    if (u.empty()) return State::mono(v);
    if (v.empty()) return State::mono(u);
    if (u.size() == 1) return insert(u[0], v);
    auto key = key2(u, v);
    if (auto it = no_memo_.find(key); it != no_memo_.end()) return it->second;
    DepthGuard g(depth_);
    fire("quasi-associativity");
    Letter x = u[0];
    Monomial U = tail(u);
    State r = insert(x, no_mono(U, v));
    // Σ_j x_{(−j−2)} (U_{(j)} v)
    Br b1 = bracket_mono(U, v);
    for (auto& [m, c] : b1.terms()) {
        if (odd_degree(m) != 1) continue;
        std::uint32_t j = even_power(m, LAM);
        r += insert(letter_T(x, j + 1), c).scaled(CoeffExpr(Gauss(Q(1, long(j) + 1))));
    }
    // (−1)^{xU} Σ_j U_{(−j−2)} (x_{(j)} v)
    bool neg = letter_odd(x) && mono_odd(U);
    Br b2 = bracket_mono({x}, v);
    for (auto& [m, c] : b2.terms()) {
        if (odd_degree(m) != 1) continue;
        std::uint32_t j = even_power(m, LAM);
        State tu = apply_T(State::mono(U), j + 1);
        Gauss k(Q(1, long(j) + 1));
        if (neg) k = -k;
        r += no(tu, c).scaled(CoeffExpr(k));
    }
    r = simplify(r);
    no_memo_.emplace(std::move(key), r);
    return r;
}

State Engine::apply_S(const State& a)
{
    State r;
    for (auto& [u, c] : a.terms()) {
        bool sign = false;
        for (std::size_t i = 0; i < u.size(); ++i) {
            std::vector<Letter> l(u.begin(), u.end());
            l[i] = letter_S(u[i]);
            r += chain(l).scaled(sign ? -c : c);
            sign ^= letter_odd(u[i]);
        }
    }
    return r;
}

State Engine::apply_T(const State& a, unsigned k)
{
    State cur = a;
    for (unsigned n = 0; n < k; ++n) {
        State r;
        for (auto& [u, c] : cur.terms())
            for (std::size_t i = 0; i < u.size(); ++i) {
                std::vector<Letter> l(u.begin(), u.end());
                l[i] = letter_T(u[i]);
                r += chain(l).scaled(c);
            }
        cur = std::move(r);
    }
    return cur;
}

// ---------------------------------------------------------------- brackets

Br Engine::sesq_S_right(const Br& x, bool a_odd)
{
    // (−1)^{a+1} { S X0 + λ X1 − χ S X1 + χ X0 },  X = X0 + χ X1
    Br r;
    CoeffExpr s = sgn(!a_odd);
    for (auto& [m, c] : x.terms()) {
        std::uint32_t j = even_power(m, LAM);
        if (odd_power(m, LAM) == 0) {
            r.add(hmono(LAM, j, 0), apply_S(c).scaled(s));
            r.add(hmono(LAM, j, 1), c.scaled(s));
        } else {
            r.add(hmono(LAM, j + 1, 0), c.scaled(s));
            r.add(hmono(LAM, j, 1), apply_S(c).scaled(-s));
        }
    }
    return r;
}

Br Engine::lambda_plus_T(const Br& x)
{
    Br r;
    for (auto& [m, c] : x.terms()) {
        std::uint32_t j = even_power(m, LAM), J = odd_power(m, LAM);
        r.add(hmono(LAM, j + 1, J), c);
        r.add(m, apply_T(c));
    }
    return r;
}

Br Engine::skew_substitute(const Br& p)
{
    return substitute_skew<State>(
        p, LAM, LAM, [this](const State& s) { return apply_S(s); }, [this](const State& s) { return apply_T(s); });
}

State Engine::integral_minus_nabla(const Br& p)
{
    State r;
    for (auto& [m, c] : p.terms()) {
        if (odd_power(m, LAM) != 1) continue;
        std::uint32_t j = even_power(m, LAM);
        Gauss k(Q(1, long(j) + 1));
        if (j & 1) k = -k;
        r += apply_T(c, j + 1).scaled(CoeffExpr(k));
    }
    return r;
}

Br Engine::base_bracket(std::uint32_t g, std::uint32_t h)
{
    if (auto it = base_memo_.find({g, h}); it != base_memo_.end()) return it->second;
    Generator G = p_.gen(g), H = p_.gen(h);
    Br r;
    if (G.kind == GenKind::ordinary && H.kind == GenKind::ordinary) {
        if (auto b = p_.bracket(g, h)) {
            r = *b;
        } else if (auto b2 = p_.bracket(h, g)) {
            fire("skew-table");
            r = skew_substitute(*b2);
            if (G.odd && H.odd) r = r.scaled(CoeffExpr(-1));
        } else if (!p_.missing_is_zero) {
            throw MissingBracket("no bracket for (" + G.name + ", " + H.name + ")");
        }
    } else if (G.kind == GenKind::ordinary) {
        fire("anchor");
        const CoeffExpr* a = p_.anchor(g, h);
        if (a) {
            r = Br::constant(p_.from_coeff(*a));
        } else if (p_.auto_derivatives) {
            std::string nm = H.name + "@" + G.name;
            auto f = p_.find(nm);
            std::uint32_t fi = f ? *f : p_.add_function(nm);
            CoeffExpr v = CoeffExpr::sym(p_.gen(fi).sym);
            p_.set_anchor(g, h, v);
            r = Br::constant(p_.from_coeff(v));
        } else if (!p_.missing_is_zero) {
            throw MissingBracket("no anchor action of " + G.name + " on " + H.name);
        }
    } else if (H.kind == GenKind::ordinary) {
        // [f_Λ h] by skew-symmetry from [h_Γ f]; f is even
        r = skew_substitute(base_bracket(h, g));
    }
    base_memo_[{g, h}] = r;
    return r;
}

Br Engine::bracket_letters(Letter x, Letter y)
{
    auto key = key2({x}, {y});
    if (auto it = br_memo_.find(key); it != br_memo_.end()) return it->second;
    std::uint32_t g = letter_gen(x);
    Br r = base_bracket(g, letter_gen(y));
    if (letter_s(y)) r = sesq_S_right(r, letter_gen_odd(x));
    for (std::uint32_t k = 0; k < letter_t(y); ++k) r = lambda_plus_T(r);
    std::uint32_t tx = letter_t(x);
    if (tx || letter_s(x)) r = mul_left(lam_chi(LAM, tx, letter_s(x), sgn(tx & 1)), r);
    br_memo_.emplace(std::move(key), r);
    return r;
}

Br Engine::bracket(const State& a, const State& b)
{
    Br r;
    for (auto& [u, cu] : a.terms())
        for (auto& [v, cv] : b.terms()) r += bracket_mono(u, v).scaled(cu * cv);
    return r;
}

Br Engine::bracket_mono(const Monomial& u, const Monomial& v)
{
    if (u.empty() || v.empty()) return {};
    if (u.size() == 1 && v.size() == 1) return bracket_letters(u[0], v[0]);
    auto key = key2(u, v);
    if (auto it = br_memo_.find(key); it != br_memo_.end()) return it->second;
    DepthGuard g(depth_);
    Br r;
    if (u.size() > 1 && v.size() == 1) {
        fire("skew-flip");
        r = skew_substitute(bracket_mono(v, u));
        if (mono_odd(u) && mono_odd(v)) r = r.scaled(CoeffExpr(-1));
    } else {
        r = wick(u, v[0], tail(v));
    }
    r = r.map_coeffs([this](const State& s) { return simplify(s); });
    br_memo_.emplace(std::move(key), r);
    return r;
}

// [u_Λ yV] = [u_Λ y]V + (−1)^{(u+1)y} y[u_Λ V] + ∫_0^Λ [[u_Λ y]_Γ V] dΓ
Br Engine::wick(const Monomial& u, Letter y, const Monomial& V)
{
    fire("wick");
    bool pu = mono_odd(u), py = letter_odd(y);
    State Vs = State::mono(V);
    Br r;
    Br a = bracket_mono(u, {y});
    for (auto& [m, c] : a.terms()) r.add(m, no(c, Vs));
    Br b = bracket_mono(u, V);
    bool s0 = (!pu) && py;
    for (auto& [m, d] : b.terms()) {
        bool neg = s0 ^ (py && (odd_degree(m) & 1));
        r.add(m, insert(y, d).scaled(sgn(neg)));
    }
    for (auto& [m, c] : a.terms()) {
        Br inner = rename_var(bracket(c, Vs), LAM, GAM);
        if (inner.is_zero()) continue;
        fire("wick-integral");
        Br comb = mul_left(ScalarHPoly::term(m, sgn(odd_degree(m) & 1)), inner);
        r += integrate_gamma(comb, GAM, LAM);
    }
    return r;
}

// ---------------------------------------------------------------- residuals

Br Engine::skew_residual(const State& a, const State& b)
{
    Br r;
    for (auto& [u, cu] : a.terms())
        for (auto& [v, cv] : b.terms()) {
            Br lhs = bracket_mono(u, v);
            Br rhs = skew_substitute(bracket_mono(v, u));
            if (mono_odd(u) && mono_odd(v)) rhs = rhs.scaled(CoeffExpr(-1));
            r += (lhs - rhs).scaled(cu * cv);
        }
    return r;
}

Br Engine::jacobi_residual(const State& a, const State& b, const State& c)
{
    Br r;
    for (auto& [u, cu] : a.terms())
        for (auto& [v, cv] : b.terms())
            for (auto& [w, cw] : c.terms()) {
                CoeffExpr k = cu * cv * cw;
                bool pa = mono_odd(u), pb = mono_odd(v);
                State ws = State::mono(w), us = State::mono(u), vs = State::mono(v);
                // [a_Λ [b_Γ c]]
                Br t1;
                Br bvw = rename_var(bracket_mono(v, w), LAM, GAM);
                for (auto& [m, e] : bvw.terms()) {
                    bool neg = (odd_degree(m) & 1) && !pa;
                    t1 += mul_left(ScalarHPoly::term(m, sgn(neg)), bracket(us, e));
                }
                // [[a_Λ b]_{Λ+Γ} c]
                Br t2;
                Br buv = bracket_mono(u, v);
                for (auto& [m, d] : buv.terms()) {
                    Br inner = rename_var(bracket(d, ws), LAM, DEL);
                    Br comb = mul_left(ScalarHPoly::term(m, sgn(odd_degree(m) & 1)), inner);
                    t2 += substitute_shift(comb, DEL, GAM, LAM);
                }
                // [b_Γ [a_Λ c]]
                Br t3;
                Br buw = bracket_mono(u, w);
                for (auto& [m, f] : buw.terms()) {
                    bool neg = (odd_degree(m) & 1) && !pb;
                    t3 += mul_left(ScalarHPoly::term(m, sgn(neg)), rename_var(bracket(vs, f), LAM, GAM));
                }
                Br res = t1;
                res += t2.scaled(sgn(pa));
                res -= t3.scaled(sgn((!pa) && (!pb)));
                r += res.scaled(k);
            }
    return r;
}

} // namespace lf
