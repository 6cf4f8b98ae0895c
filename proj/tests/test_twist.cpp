#include "lf/geometry.hpp"
#include "lf/twist.hpp"

#include <doctest.h>

using namespace lf;
using namespace lf::twist;

namespace {

struct Fixture {
    std::unique_ptr<FlatSetup> s = flat_setup(1);
    Frames fr = free_frames(*s->engine);
    Vec vac{{fock::FMono{}, Gauss(1)}};

    Vec st(const State& x) { return s->ev->state(x); }
    Vec op(const ZeroMode& z, const Vec& v) { return apply(*s->ev, z, v); }
};

bool same(const Vec& a, const Vec& b)
{
    Vec d = a;
    fock::axpy(d, Gauss(-1), b);
    return fock::vec_zero(d);
}

} // namespace

TEST_CASE("vacuum is annihilated by every zero mode")
{
    Fixture f;
    for (auto* sec : {&f.s->ops.plus, &f.s->ops.minus})
        for (auto* z : {&sec->L0, &sec->J0, &sec->Q0, &sec->G0}) CHECK(fock::vec_zero(f.op(*z, f.vac)));
}

TEST_CASE("frame states carry unit fermionic charge")
{
    Fixture f;
    Vec ep_low = f.st(f.fr.epd[0]), ep_up = f.st(f.fr.ep[0]);
    Vec em_low = f.st(f.fr.emd[0]), em_up = f.st(f.fr.em[0]);
    CHECK(same(f.op(f.s->ops.plus.J0, ep_low), ep_low));
    CHECK(same(f.op(f.s->ops.plus.J0, ep_up), fock::scaled(ep_up, Gauss(-1))));
    CHECK(fock::vec_zero(f.op(f.s->ops.plus.J0, em_low)));
    CHECK(same(f.op(f.s->ops.minus.J0, em_low), em_low));
    CHECK(same(f.op(f.s->ops.minus.J0, em_up), fock::scaled(em_up, Gauss(-1))));
    // twisted weights: e_+ has L0+ = 0, e^+ has L0+ = 1
    CHECK(fock::vec_zero(f.op(f.s->ops.plus.L0, ep_low)));
    CHECK(same(f.op(f.s->ops.plus.L0, ep_up), ep_up));
}

TEST_CASE("L0 has a Laplacian Jordan block on B Bbar")
{
    Fixture f;
    auto& p = f.s->engine->pres();
    Vec bb = f.st(f.s->engine->no(p.state("B[1]"), p.state("Bb[1]")));
    Vec l = f.op(f.s->ops.plus.L0, bb);
    CHECK(same(l, fock::scaled(f.vac, Gauss::frac(1, 2))));
    CHECK(fock::vec_zero(f.op(f.s->ops.plus.L0, l)));
    CHECK(same(f.op(f.s->ops.minus.L0, bb), fock::scaled(f.vac, Gauss::frac(-1, 2))));
    // J0± stay diagonal there
    CHECK(fock::vec_zero(f.op(f.s->ops.plus.J0, bb)));
}

TEST_CASE("BRST identities on the truncated module")
{
    Fixture f;
    Basis B = twist_basis(*f.s->model, {2, 2, 1});
    CHECK(B.size() == 74);
    BrstReport r = brst_check(*f.s->ev, f.s->ops, B);
    for (auto& c : r.checks) {
        INFO(c.name);
        CHECK(c.ok());
    }
    CHECK(r.checks.size() == 22);
    CHECK_FALSE(r.negative_control.ok());
    CHECK(r.ok());
    // the literal G0 squares to zero but does not close on L0
    bool lit_fails = false;
    for (auto& d : r.diagnostics)
        if (d.name.find("literal, Q0") != std::string::npos && !d.ok()) lit_fails = true;
    CHECK(lit_fails);
}

TEST_CASE("spectrum and Q+ cohomology at the lowest twisted weight")
{
    Fixture f;
    for (int Dbar : {0, 1}) {
        Basis B = twist_basis(*f.s->model, {4, 2, Dbar});
        Spectrum sp = spectrum(*f.s->ev, f.s->ops, B);
        CHECK(sp.complete);
        CHECK(sp.closed);
        CHECK(sp.total_weight_ok);
        CHECK(sp.j0_diagonalizable);
        CHECK(sp.l0_diagonalizable == (Dbar == 0)); // B Bbar gives a Jordan block
        CohomologyTable t = cohomology(*f.s->ev, f.s->ops, B, sp, Diff::Qplus, Q(0), Q(0));
        CHECK(t.closed);
        CHECK(t.stable);
        CHECK(t.total() == std::size_t(2 * (Dbar + 1)));
        long euler = 0;
        for (auto& row : t.rows) {
            if (row.h) CHECK(row.qp == 0);
            euler += (row.degree % 2 ? -1 : 1) * long(row.h);
        }
        CHECK(euler == t.euler); // Euler characteristic of cochains = of cohomology
        // independent count from the d_{L1+} complex
        auto d = geo::flat_kahler(1);
        auto fr = geo::frames(d);
        auto ac = geo::algebroid_cohomology(fr.ep, fr.epd, fr.emd, fr.em, geo::Form(2), 2, Dbar);
        CHECK(ac.closed);
        CHECK(ac.square_zero);
        CHECK(ac.total() == t.total());
        for (auto& row : t.rows) CHECK(ac.at(int(row.qp), int(row.qm)) == row.h);
    }
}

TEST_CASE("differential names")
{
    for (auto n : {"Q+", "Q-", "QB", "QA"}) CHECK(diff_name(parse_diff(n)) == n);
    CHECK_THROWS(parse_diff("Q"));
}
