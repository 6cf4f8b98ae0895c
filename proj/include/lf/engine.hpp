#pragma once

#include "lf/presentation.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

namespace lf {

struct VecHash {
    std::size_t operator()(const std::vector<std::uint32_t>& v) const noexcept
    {
        std::size_t h = 1469598103934665603ull;
        for (auto x : v) h = (h ^ x) * 1099511628211ull;
        return h;
    }
};

// Canonical forms and Λ-brackets over one presentation. Not thread-safe:
// memo tables are mutable; use one engine per thread.
class Engine {
public:
    explicit Engine(Presentation p);

    Presentation& pres() { return p_; }
    const Presentation& pres() const { return p_; }

    // canonical forms
    State insert(Letter x, const Monomial& v);
    State insert(Letter x, const State& v);
    State chain(const std::vector<Letter>& letters);
    State no(const State& a, const State& b);
    State no_mono(const Monomial& u, const Monomial& v);
    State apply_S(const State& a);
    State apply_T(const State& a, unsigned k = 1);
    // ((a b) c) rewritten to canonical form through quasi-associativity
    State reassociate(const State& a, const State& b, const State& c) { return no(no(a, b), c); }

    // [a_Λ b] in LAM
    Br bracket(const State& a, const State& b);
    Br bracket_mono(const Monomial& u, const Monomial& v);
    Br bracket_letters(Letter x, Letter y);

    // [a_Λ b] − (−1)^{ab}[b_{−Λ−∇} a]
    Br skew_residual(const State& a, const State& b);
    // [a_Λ[b_Γ c]] + (−1)^a[[a_Λ b]_{Λ+Γ} c] − (−1)^{(a+1)(b+1)}[b_Γ[a_Λ c]] in (LAM, GAM)
    Br jacobi_residual(const State& a, const State& b, const State& c);

    // Γ → −Λ−∇ applied to a polynomial in LAM; result in LAM
    Br skew_substitute(const Br& p);
    // ∫_{−∇}^0 dΛ of a polynomial in LAM
    State integral_minus_nabla(const Br& p);

    // sesquilinearity on the right: [a_Λ S b] from X = [a_Λ b]
    Br sesq_S_right(const Br& x, bool a_odd);
    // (λ + T) X
    Br lambda_plus_T(const Br& x);

    const std::map<std::string, std::uint64_t>& rule_counts() const { return fired_; }
    void clear_caches();
    std::size_t cache_size() const { return br_memo_.size() + no_memo_.size() + ins_memo_.size(); }

private:
    Br base_bracket(std::uint32_t g, std::uint32_t h);
    Br wick(const Monomial& u, Letter y, const Monomial& V);
    State corr(Letter x, Letter y, const Monomial& V);
    State simplify(const State& s) const;
    void fire(const char* rule) { ++fired_[rule]; }

    Presentation p_;
    std::unordered_map<std::vector<std::uint32_t>, Br, VecHash> br_memo_;
    std::unordered_map<std::vector<std::uint32_t>, State, VecHash> no_memo_;
    std::unordered_map<std::vector<std::uint32_t>, State, VecHash> ins_memo_;
    std::map<std::pair<std::uint32_t, std::uint32_t>, Br> base_memo_;
    std::map<std::string, std::uint64_t> fired_;
    int depth_ = 0;
};

// scalar monomial λ^j χ^J in variable v
ScalarHPoly lam_chi(LambdaVar v, std::uint32_t j, std::uint32_t J, const CoeffExpr& c = CoeffExpr(1));
// Br from a plain state (constant in Λ)
inline Br br_const(const State& s) { return Br::constant(s); }

} // namespace lf
