#include "lf/models.hpp"

#include <doctest.h>

using namespace lf;

TEST_CASE("free pair base bracket")
{
    Engine e(free_sigma_model(1));
    auto& p = e.pres();
    Br b = e.bracket(p.state("Psi[1]"), p.state("B[1]"));
    CHECK(b == Br::constant(State::vac()));
    CHECK(e.bracket(p.state("B[1]"), p.state("B[1]")).is_zero());
    CHECK(e.bracket(p.state("Psi[1]"), p.state("Psi[1]")).is_zero());
    CHECK(e.bracket(p.state("Psi[1]"), State::vac()).is_zero());
    CHECK(e.skew_residual(p.state("Psi[1]"), p.state("B[1]")).is_zero());
}

TEST_CASE("H bracket for one free pair")
{
    Engine e(free_sigma_model(1));
    auto& p = e.pres();
    State B = p.state("B[1]"), Psi = p.state("Psi[1]");
    State H = e.no(e.apply_S(B), e.apply_S(Psi)) + e.no(e.apply_T(B), Psi);
    Br r = e.bracket(H, H) - conformal_op(e, H, 2, 3);
    INFO(render_br(p, r));
    CHECK(r == Br::term(hmono(LAM, 2, 1), State::vac()));
}

TEST_CASE("flat n=1 N=2,2 relations")
{
    for (int model = 0; model < 2; ++model) {
        Engine e(model == 0 ? free_sigma_model(1) : uch_patch_flat(1));
        Frames f = model == 0 ? free_frames(e) : uch_frames(e);
        auto nf = build_fields(e, f);
        for (auto& r : verify_n22(e, nf, Gauss(3))) {
            INFO(model << " " << r.name << " = " << render_br(e.pres(), r.value));
            CHECK(r.ok());
        }
        auto d = verify_single_n2(e, nf.Jp + nf.Jm, nf.Hp + nf.Hm, Gauss(6));
        for (auto& r : d) {
            INFO(model << " diag " << r.name << " = " << render_br(e.pres(), r.value));
            CHECK(r.ok());
        }
    }
}

TEST_CASE("flat Calabi-Yau expansions in B, Psi")
{
    Engine e(free_sigma_model(1));
    auto& p = e.pres();
    auto nf = build_fields(e, free_frames(e));
    State B = p.state("B[1]"), Bb = p.state("Bb[1]"), Psi = p.state("Psi[1]"), Psib = p.state("Psib[1]");
    CoeffExpr i(Gauss::I());
    State J1 = e.no(e.apply_S(B), Psi).scaled(i) - e.no(e.apply_S(Bb), Psib).scaled(i);
    State J2 = e.no(e.apply_S(B), e.apply_S(Bb)).scaled(i) - e.no(Psi, Psib).scaled(i);
    State H = e.no(e.apply_S(B), e.apply_S(Psi)) + e.no(e.apply_T(B), Psi) + e.no(e.apply_S(Bb), e.apply_S(Psib)) +
              e.no(e.apply_T(Bb), Psib);
    State Hd = e.no(e.apply_S(Psi), Psib) + e.no(Psi, e.apply_S(Psib)) + e.no(e.apply_T(B), e.apply_S(Bb)) +
               e.no(e.apply_S(B), e.apply_T(Bb));
    CHECK(nf.Jp + nf.Jm == J1);
    CHECK(nf.Jp - nf.Jm == J2);
    CHECK(nf.Hp + nf.Hm == H);
    CHECK(nf.Hp - nf.Hm == Hd);
    CHECK(nf.Jp.parity() == 0);
    CHECK(nf.Hp.parity() == 1);
}

TEST_CASE("flat n=2 relations and central terms")
{
    Engine e(free_sigma_model(2));
    auto nf = build_fields(e, free_frames(e));
    for (auto& r : verify_n22(e, nf, Gauss(6))) {
        INFO(r.name << " = " << render_br(e.pres(), r.value));
        CHECK(r.ok());
    }
    State H = nf.Hp + nf.Hm;
    CHECK(coefficient(e.bracket(H, H), 2, 1) == State::vac(CoeffExpr(4)));
    CHECK(coefficient(e.bracket(nf.Hp, nf.Hp), 2, 1) == State::vac(CoeffExpr(2)));
}
