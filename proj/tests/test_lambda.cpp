#include "lf/state.hpp"

#include <doctest.h>

#include <random>

using namespace lf;

namespace {
ScalarHPoly mono(LambdaVar v, unsigned j, unsigned J, long c = 1) { return ScalarHPoly::term(hmono(v, j, J), CoeffExpr(c)); }
ScalarHPoly mono2(unsigned j1, unsigned J1, unsigned j2, unsigned J2, long c = 1)
{
    return hpoly_mul(mono(LAM, j1, J1), mono(GAM, j2, J2, c));
}
} // namespace

TEST_CASE("chi squared is minus lambda")
{
    CHECK(hpoly_mul(mono(LAM, 0, 1), mono(LAM, 0, 1)) == mono(LAM, 1, 0, -1));
    CHECK(hpoly_mul(mono(LAM, 1, 0), mono(LAM, 0, 1)) == hpoly_mul(mono(LAM, 0, 1), mono(LAM, 1, 0)));
}

TEST_CASE("odd parts of distinct variables anticommute")
{
    auto a = hpoly_mul(mono(LAM, 0, 1), mono(GAM, 0, 1));
    auto b = hpoly_mul(mono(GAM, 0, 1), mono(LAM, 0, 1));
    CHECK(a == b.scaled(CoeffExpr(-1)));
    CHECK(hpoly_mul(mono(GAM, 0, 1), mono(GAM, 0, 1)) == mono(GAM, 1, 0, -1));
}

TEST_CASE("product is associative, graded commutative on disjoint odd parts")
{
    std::mt19937 rng(7);
    std::uniform_int_distribution<unsigned> d3(0, 2), d1(0, 1);
    for (int trial = 0; trial < 1000; ++trial) {
        ScalarHPoly x[3];
        for (auto& p : x) p = mono2(d3(rng), d1(rng), d3(rng), d1(rng), long(d3(rng)) + 1);
        CHECK(hpoly_mul(hpoly_mul(x[0], x[1]), x[2]) == hpoly_mul(x[0], hpoly_mul(x[1], x[2])));
        // graded commutativity holds when no odd part is shared; χ·χ = −λ breaks it otherwise
        const HMono &m0 = x[0].terms().begin()->first, &m1 = x[1].terms().begin()->first;
        bool shared = (odd_power(m0, LAM) && odd_power(m1, LAM)) || (odd_power(m0, GAM) && odd_power(m1, GAM));
        if (shared) continue;
        int o0 = odd_degree(m0) & 1, o1 = odd_degree(m1) & 1;
        auto ab = hpoly_mul(x[0], x[1]), ba = hpoly_mul(x[1], x[0]);
        CHECK(ab == ba.scaled(CoeffExpr((o0 & o1) ? -1 : 1)));
    }
}

TEST_CASE("integration over Gamma")
{
    CHECK(integrate_gamma(mono(GAM, 0, 1), GAM, LAM) == mono(LAM, 1, 0));
    CHECK(integrate_gamma(mono(GAM, 0, 0), GAM, LAM).is_zero());
    auto r = integrate_gamma(mono(GAM, 1, 1), GAM, LAM);
    CHECK(r == ScalarHPoly::term(hmono(LAM, 2, 0), CoeffExpr(Gauss::frac(1, 2))));
    // odd Λ in front of η: ∂_η passes χ
    CHECK(integrate_gamma(mono2(0, 1, 0, 1), GAM, LAM) == mono(LAM, 1, 1, -1));
    // linearity
    auto p = mono(GAM, 2, 1, 3) + mono(GAM, 1, 0, 5);
    CHECK(integrate_gamma(p, GAM, LAM) == integrate_gamma(mono(GAM, 2, 1, 3), GAM, LAM));
}

TEST_CASE("skew substitution on states")
{
    auto S = [](const State& s) { return s; };
    std::function<State(const State&)> zero = [](const State&) { return State(); };
    Monomial m{make_letter(0, false)};
    std::function<State(const State&)> T = [&](const State& s) {
        State r;
        for (auto& [mm, c] : s.terms()) {
            Monomial n = mm;
            for (auto& l : n) l = letter_T(l);
            r.add(n, c);
        }
        return r;
    };
    (void)S;
    Br p = Br::constant(State::mono(m));
    CHECK(substitute_skew(p, GAM, LAM, zero, T) == p);
    Br q = Br::term(hmono(GAM, 1, 0), State::mono(m));
    Br want = Br::term(hmono(LAM, 1, 0), State::mono(m, CoeffExpr(-1)));
    want.add({}, State::mono({letter_T(m[0])}, CoeffExpr(-1)));
    CHECK(substitute_skew(q, GAM, LAM, zero, T) == want);
    Br c = Br::term(hmono(GAM, 0, 1), State::vac());
    CHECK(substitute_skew(c, GAM, LAM, zero, zero) == Br::term(hmono(LAM, 0, 1), State::vac(CoeffExpr(-1))));
}

TEST_CASE("mode extraction")
{
    Monomial m{make_letter(0, false)};
    Br d = Br::constant(State::vac(CoeffExpr(5)));
    CHECK(mode_extract(d, LAM, 0, 0) == State::vac(CoeffExpr(5)));
    Br p = Br::term(hmono(LAM, 1, 1), State::mono(m));
    CHECK(mode_extract(p, LAM, 1, 1) == State::mono(m));
    CHECK(mode_extract(Br::term(hmono(LAM, 0, 1), State::mono(m)), LAM, 1, 0).is_zero());
    Br r = Br::term(hmono(LAM, 3, 1), State::mono(m, CoeffExpr(2))) + Br::term(hmono(LAM, 2, 0), State::vac());
    std::map<std::pair<std::uint32_t, std::uint32_t>, State> modes;
    for (unsigned j = 0; j < 5; ++j)
        for (unsigned J = 0; J < 2; ++J) {
            auto s = mode_extract(r, LAM, j, J);
            if (!s.is_zero()) modes[{j, J}] = s;
        }
    CHECK(from_modes(modes, LAM) == r);
}
