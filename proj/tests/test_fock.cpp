#include "lf/fock.hpp"
#include "lf/models.hpp"

#include <doctest.h>

using namespace lf;
using namespace lf::fock;

namespace {
Presentation one_pair()
{
    Presentation p;
    p.add_generator("B", false, 0);
    p.add_generator("Psi", true, 1);
    p.set_bracket(1, 0, Br::constant(State::vac()));
    return p;
}
} // namespace

TEST_CASE("basis enumeration")
{
    Model M(one_pair());
    CHECK(build_fock(M, 0).size() == 1);
    auto b1 = build_fock(M, 1);
    CHECK(b1.size() == 3);
    std::size_t prev = 0;
    for (int c = 0; c <= 8; ++c) {
        auto b = build_fock(M, c);
        CHECK(b.size() >= prev);
        prev = b.size();
    }
    CHECK(build_fock(M, 0, 3).size() == 4);
}

TEST_CASE("component brackets are skew-consistent")
{
    Model M(free_sigma_model(2));
    std::size_t n = M.components().size();
    for (std::uint32_t x = 0; x < n; ++x)
        for (std::uint32_t y = 0; y < n; ++y) {
            bool both = M.components()[x].odd && M.components()[y].odd;
            // [Y_λ X] = −(−1)^{XY} [X_{−λ} Y] for constant brackets
            CHECK(M.c0(y, x) == (both ? M.c0(x, y) : -M.c0(x, y)));
            CHECK(M.c1(y, x) == (both ? -M.c1(x, y) : M.c1(x, y)));
        }
}

TEST_CASE("vacuum axiom and translation covariance")
{
    Engine e(free_sigma_model(1));
    Model M(e.pres());
    Evaluator ev(M);
    Vec vacv{{FMono{}, Gauss(1)}};
    auto& p = e.pres();
    State B = p.state("B[1]"), Psi = p.state("Psi[1]");
    std::vector<State> fields = {Psi, e.no(e.apply_S(B), Psi), e.no(e.apply_T(B), e.apply_S(Psi)),
                                 e.no(B, e.no(Psi, e.apply_S(Psi)))};
    for (auto& s : fields) {
        Field f = from_state(M, s);
        for (long j = 0; j < 4; ++j) CHECK(ev.apply(f, j, vacv).empty());
        CHECK(!ev.apply(f, -1, vacv).empty());
        // (T f)_(-1)|0> = f_(-2)|0>
        CHECK(ev.apply(apply_T(M, f), -1, vacv) == ev.apply(f, -2, vacv));
        // S∘S = T on states
        CHECK(ev.state(apply_S(M, apply_S(M, f))) == ev.state(apply_T(M, f)));
    }
}

TEST_CASE("oracle Borcherds identity on composite fields")
{
    Engine e(free_sigma_model(1));
    Model M(e.pres());
    Evaluator ev(M);
    auto& p = e.pres();
    State B = p.state("B[1]"), Psi = p.state("Psi[1]");
    Field H = from_state(M, e.no(e.apply_S(B), e.apply_S(Psi)) + e.no(e.apply_T(B), Psi));
    Field J = from_state(M, e.no(B, Psi));
    Basis basis = build_fock(M, 3, 1);
    for (long m = -1; m <= 2; ++m)
        for (long n = -2; n <= 1; ++n) {
            auto c = check_borcherds(ev, H, J, m, n, basis);
            INFO(m << " " << n << " " << c.first_mismatch);
            CHECK(c.ok());
        }
}

TEST_CASE("oracle against engine")
{
    Engine e(free_sigma_model(1));
    Model M(e.pres());
    Evaluator ev(M);
    auto& p = e.pres();
    State B = p.state("B[1]"), Psi = p.state("Psi[1]");
    Basis basis = build_fock(M, 5, 2);
    auto t = commutator_structure(ev, from_state(M, Psi), from_state(M, B), basis);
    REQUIRE(t.size() == 1);
    CHECK(t.begin()->first == std::pair<std::uint32_t, std::uint32_t>{0, 0});
    CHECK(t.begin()->second == Vec{{FMono{}, Gauss(1)}});
    CHECK(commutator_structure(ev, from_state(M, Psi), from_state(M, State::vac()), basis).empty());
    State H = e.no(e.apply_S(B), e.apply_S(Psi)) + e.no(e.apply_T(B), Psi);
    auto hh = commutator_structure(ev, from_state(M, H), from_state(M, H), basis);
    CHECK(hh[{2, 1}] == Vec{{FMono{}, Gauss(2)}}); // 2! · coefficient 1
    std::vector<State> xs = {B, Psi, H, e.no(B, Psi), e.no(e.apply_S(B), Psi), e.no(Psi, e.apply_S(Psi))};
    for (auto& a : xs)
        for (auto& b : xs) {
            auto c = compare_with_engine(e, ev, a, b, basis);
            INFO(render_state(p, a) << " , " << render_state(p, b) << " : " << c.first_mismatch);
            CHECK(c.ok());
        }
}
