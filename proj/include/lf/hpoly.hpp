#pragma once

#include "lf/coeff.hpp"

#include <algorithm>
#include <atomic>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace lf {

// A Λ-variable: even part λ, odd part χ with χ² = −λ.
struct LambdaVar {
    std::uint32_t id = 0;
    static LambdaVar fresh();
    friend auto operator<=>(const LambdaVar&, const LambdaVar&) = default;
};

// Names used when rendering a variable (λ/χ for id 0, γ/η for 1, δ/ζ for 2, then numbered).
std::string even_name(LambdaVar v);
std::string odd_name(LambdaVar v);

struct VarPow {
    std::uint32_t var;
    std::uint32_t j;
    std::uint32_t J;
    friend auto operator<=>(const VarPow&, const VarPow&) = default;
};

// Monomial λ_1^{j_1} … with odd parts written in increasing variable order,
// to the left of the coefficient.
using HMono = std::vector<VarPow>;

int odd_degree(const HMono& m);
std::uint32_t even_power(const HMono& m, LambdaVar v);
std::uint32_t odd_power(const HMono& m, LambdaVar v);
HMono hmono(LambdaVar v, std::uint32_t j, std::uint32_t J);
// a·b = sign · result
HMono hmono_mul(const HMono& a, const HMono& b, int& sign);
std::string hmono_str(const HMono& m);

// coefficient traits for CoeffExpr (always even)
inline bool coeff_is_zero(const CoeffExpr& c) { return c.is_zero(); }
inline CoeffExpr koszul(const CoeffExpr& c, bool) { return c; }
inline CoeffExpr scale(const CoeffExpr& c, const CoeffExpr& s) { return c * s; }

template <class C>
class HPoly {
public:
    using Map = std::map<HMono, C>;

    HPoly() = default;
    static HPoly constant(const C& c)
    {
        HPoly p;
        p.add(HMono{}, c);
        return p;
    }
    static HPoly term(const HMono& m, const C& c)
    {
        HPoly p;
        p.add(m, c);
        return p;
    }

    void add(const HMono& m, const C& c)
    {
        if (coeff_is_zero(c)) return;
        auto it = t_.find(m);
        if (it == t_.end()) {
            t_.emplace(m, c);
            return;
        }
        it->second += c;
        if (coeff_is_zero(it->second)) t_.erase(it);
    }
    HPoly& operator+=(const HPoly& o)
    {
        for (auto& [m, c] : o.t_) add(m, c);
        return *this;
    }
    HPoly& operator-=(const HPoly& o)
    {
        for (auto& [m, c] : o.t_) add(m, scale(c, CoeffExpr(-1)));
        return *this;
    }
    friend HPoly operator+(HPoly a, const HPoly& b) { return a += b; }
    friend HPoly operator-(HPoly a, const HPoly& b) { return a -= b; }
    HPoly scaled(const CoeffExpr& s) const
    {
        HPoly r;
        if (s.is_zero()) return r;
        for (auto& [m, c] : t_) r.add(m, scale(c, s));
        return r;
    }

    bool is_zero() const { return t_.empty(); }
    const Map& terms() const { return t_; }
    std::size_t size() const { return t_.size(); }
    friend bool operator==(const HPoly& a, const HPoly& b) { return a.t_ == b.t_; }

    // coefficient of a monomial (zero if absent)
    C at(const HMono& m) const
    {
        auto it = t_.find(m);
        return it == t_.end() ? C() : it->second;
    }

    template <class F>
    HPoly map_coeffs(F&& f) const
    {
        HPoly r;
        for (auto& [m, c] : t_) r.add(m, f(c));
        return r;
    }

private:
    Map t_;
};

using ScalarHPoly = HPoly<CoeffExpr>;

// (m1 s)(m2 c) with s scalar
template <class C>
HPoly<C> mul_left(const ScalarHPoly& s, const HPoly<C>& p)
{
    HPoly<C> r;
    for (auto& [m1, c1] : s.terms())
        for (auto& [m2, c2] : p.terms()) {
            int sg = 1;
            HMono m = hmono_mul(m1, m2, sg);
            CoeffExpr k = c1;
            if (sg < 0) k = -k;
            r.add(m, scale(c2, k));
        }
    return r;
}

// (m1 c)(m2 s) = (−1)^{|c||m2|} m1 m2 (c s)
template <class C>
HPoly<C> mul_right(const HPoly<C>& p, const ScalarHPoly& s)
{
    HPoly<C> r;
    for (auto& [m1, c1] : p.terms())
        for (auto& [m2, c2] : s.terms()) {
            int sg = 1;
            HMono m = hmono_mul(m1, m2, sg);
            CoeffExpr k = c2;
            if (sg < 0) k = -k;
            r.add(m, scale(koszul(c1, odd_degree(m2) & 1), k));
        }
    return r;
}

inline ScalarHPoly hpoly_mul(const ScalarHPoly& a, const ScalarHPoly& b) { return mul_left(a, b); }

// ∫_0^Λ dΓ: ∂_η first, then ∫_0^λ dγ.
template <class C>
HPoly<C> integrate_gamma(const HPoly<C>& p, LambdaVar G, LambdaVar L)
{
    HPoly<C> r;
    for (auto& [m, c] : p.terms()) {
        std::uint32_t j = 0;
        bool has_odd = false;
        int before = 0;
        HMono rest;
        for (auto& vp : m) {
            if (vp.var == G.id) {
                j = vp.j;
                has_odd = vp.J != 0;
                continue;
            }
            if (vp.var < G.id && vp.J) ++before;
            rest.push_back(vp);
        }
        if (!has_odd) continue;
        // multiply by λ^{j+1}; λ central so just bump the exponent
        bool found = false;
        for (auto& vp : rest)
            if (vp.var == L.id) {
                vp.j += j + 1;
                found = true;
            }
        if (!found) {
            rest.push_back({L.id, j + 1, 0});
            std::sort(rest.begin(), rest.end());
        }
        Gauss k(Q(1, long(j) + 1));
        if (before & 1) k = -k;
        r.add(rest, scale(c, CoeffExpr(k)));
    }
    return r;
}

// Γ → −Λ−∇ on a polynomial in Γ alone. S, T act on the coefficient.
template <class C>
HPoly<C> substitute_skew(const HPoly<C>& p, LambdaVar G, LambdaVar L,
                         const std::function<C(const C&)>& S, const std::function<C(const C&)>& T)
{
    HPoly<C> r;
    for (auto& [m, c] : p.terms()) {
        std::uint32_t j = 0, J = 0;
        for (auto& vp : m) {
            if (vp.var != G.id) throw std::invalid_argument("substitute_skew: polynomial not in Γ alone");
            j = vp.j;
            J = vp.J;
        }
        // (−λ−T)^j c = Σ_k C(j,k) (−λ)^{j−k} (−T)^k c
        C tk = c;
        for (std::uint32_t k = 0; k <= j; ++k) {
            if (k > 0) tk = T(tk);
            Gauss w(binomial(long(j), k));
            if (j & 1) w = -w; // (−1)^{j−k}(−1)^k
            C term = scale(tk, CoeffExpr(w));
            std::uint32_t lp = j - k;
            if (!J) {
                r.add(hmono(L, lp, 0), term);
            } else {
                // (−χ−S) applied to λ^{lp} term
                r.add(hmono(L, lp, 1), scale(term, CoeffExpr(-1)));
                r.add(hmono(L, lp, 0), scale(S(term), CoeffExpr(-1)));
            }
        }
    }
    return r;
}

// Δ → Γ + Λ, substituted in place: (vars before Δ)(Γ+Λ)^{j|J}(vars after Δ)
template <class C>
HPoly<C> substitute_shift(const HPoly<C>& p, LambdaVar D, LambdaVar G, LambdaVar L)
{
    HPoly<C> r;
    for (auto& [m, c] : p.terms()) {
        std::uint32_t j = 0, J = 0;
        HMono before, after;
        for (auto& vp : m) {
            if (vp.var == D.id) {
                j = vp.j;
                J = vp.J;
            } else if (vp.var < D.id) {
                before.push_back(vp);
            } else {
                after.push_back(vp);
            }
        }
        ScalarHPoly sub = ScalarHPoly::constant(CoeffExpr(1));
        for (std::uint32_t k = 0; k < j; ++k) {
            ScalarHPoly f;
            f.add(hmono(G, 1, 0), CoeffExpr(1));
            f.add(hmono(L, 1, 0), CoeffExpr(1));
            sub = hpoly_mul(sub, f);
        }
        if (J) {
            ScalarHPoly f;
            f.add(hmono(G, 0, 1), CoeffExpr(1));
            f.add(hmono(L, 0, 1), CoeffExpr(1));
            sub = hpoly_mul(sub, f);
        }
        sub = hpoly_mul(ScalarHPoly::term(before, CoeffExpr(1)), sub);
        r += mul_left(sub, HPoly<C>::term(after, c));
    }
    return r;
}

// relabel one variable; reorders odd parts with signs
template <class C>
HPoly<C> rename_var(const HPoly<C>& p, LambdaVar from, LambdaVar to)
{
    HPoly<C> r;
    for (auto& [m, c] : p.terms()) {
        int sg = 1;
        HMono acc;
        for (auto& vp : m) {
            VarPow q = vp;
            if (q.var == from.id) q.var = to.id;
            acc = hmono_mul(acc, HMono{q}, sg);
        }
        r.add(acc, sg < 0 ? scale(c, CoeffExpr(-1)) : c);
    }
    return r;
}

// j! times the coefficient of λ^j χ^J
template <class C>
C mode_extract(const HPoly<C>& p, LambdaVar v, std::uint32_t j, std::uint32_t J)
{
    return scale(p.at(hmono(v, j, J)), CoeffExpr(Gauss(factorial(j))));
}

// Σ λ^j χ^J / j! · modes
template <class C>
HPoly<C> from_modes(const std::map<std::pair<std::uint32_t, std::uint32_t>, C>& modes, LambdaVar v)
{
    HPoly<C> r;
    for (auto& [k, c] : modes) r.add(hmono(v, k.first, k.second), scale(c, CoeffExpr(Gauss(Q(1) / factorial(k.first)))));
    return r;
}

template <class C>
std::string hpoly_str(const HPoly<C>& p, const std::function<std::string(const C&)>& cs)
{
    if (p.is_zero()) return "0";
    std::string out;
    for (auto& [m, c] : p.terms()) {
        if (!out.empty()) out += " + ";
        std::string ms = hmono_str(m);
        std::string s = cs(c);
        if (ms.empty()) out += "(" + s + ")";
        else out += ms + "*(" + s + ")";
    }
    return out;
}

} // namespace lf
