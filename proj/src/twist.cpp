#include "lf/twist.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace lf::twist {

using fock::axpy;
using fock::FMono;
using fock::vec_zero;

Vec apply(Evaluator& ev, const ZeroMode& op, const Vec& v)
{
    Vec r;
    for (auto& t : op.terms) axpy(r, t.c, ev.apply_mode(t.f, t.j, t.J, v));
    return r;
}

ZeroMode combine(const std::string& label, const ZeroMode& a, const Gauss& ca, const ZeroMode& b, const Gauss& cb)
{
    if (a.odd != b.odd) throw std::invalid_argument("twist: combining operators of different parity");
    ZeroMode r{label, a.odd, {}};
    for (auto t : a.terms) {
        t.c *= ca;
        r.terms.push_back(t);
    }
    for (auto t : b.terms) {
        t.c *= cb;
        r.terms.push_back(t);
    }
    return r;
}

ZeroMode flip_term(const ZeroMode& op, std::size_t term)
{
    ZeroMode r = op;
    r.label += " (sign flipped)";
    r.terms.at(term).c = -r.terms.at(term).c;
    return r;
}

SectorOps sector_ops(const fock::Model& M, const State& J, const State& H, const std::string& tag)
{
    Field fj = fock::from_state(M, J), fh = fock::from_state(M, H);
    const Gauss h = Gauss::frac(1, 2), ih = Gauss::I() * h;
    SectorOps s;
    s.L0 = {"L0" + tag, false, {{fh, 1, 0, h}, {fj, 0, 1, ih}}};
    s.J0 = {"J0" + tag, false, {{fj, 0, 1, -Gauss::I()}}};
    s.Q0 = {"Q0" + tag, true, {{fh, 0, 1, h}, {fj, 0, 0, ih}}};
    s.G0 = {"G0" + tag, true, {{fh, 1, 1, h}, {fj, 1, 0, -ih}}};
    s.G0_literal = {"G0" + tag + " literal", true, {{fh, 0, 1, h}, {fj, 0, 0, -ih}}};
    return s;
}

ZeroModes zero_modes(const fock::Model& M, const NamedFields& f)
{
    return {sector_ops(M, f.Jp, f.Hp, "+"), sector_ops(M, f.Jm, f.Hm, "-")};
}

Diff parse_diff(const std::string& s)
{
    if (s == "Q+") return Diff::Qplus;
    if (s == "Q-") return Diff::Qminus;
    if (s == "QB") return Diff::QB;
    if (s == "QA") return Diff::QA;
    throw std::invalid_argument("twist: unknown differential '" + s + "' (Q+|Q-|QB|QA)");
}

std::string diff_name(Diff d)
{
    switch (d) {
    case Diff::Qplus: return "Q+";
    case Diff::Qminus: return "Q-";
    case Diff::QB: return "QB";
    case Diff::QA: return "QA";
    }
    return "?";
}

ZeroMode differential(const ZeroModes& z, Diff d)
{
    switch (d) {
    case Diff::Qplus: return z.plus.Q0;
    case Diff::Qminus: return z.minus.Q0;
    case Diff::QB: return combine("QB", z.plus.Q0, Gauss(1), z.minus.Q0, Gauss(1));
    case Diff::QA: return combine("QA", z.plus.Q0, Gauss(1), z.minus.G0, Gauss(1));
    }
    throw std::logic_error("twist: bad differential");
}

std::unique_ptr<FlatSetup> flat_setup(int n)
{
    auto s = std::make_unique<FlatSetup>();
    s->engine = std::make_unique<Engine>(free_sigma_model(n));
    s->fields = build_fields(*s->engine, free_frames(*s->engine));
    s->model = std::make_unique<fock::Model>(s->engine->pres());
    s->ev = std::make_unique<Evaluator>(*s->model);
    s->ops = zero_modes(*s->model, s->fields);
    return s;
}

Basis twist_basis(const fock::Model& M, const Truncation& t)
{
    const auto& comps = M.components();
    auto starts = [](const std::string& s, const char* p) { return s.rfind(p, 0) == 0; };
    // F-counted modes and Bb zero modes
    std::vector<int> kind(comps.size(), 0); // 1: B, 2: S B or Psib, 3: Bb
    for (std::size_t c = 0; c < comps.size(); ++c) {
        const std::string& g = M.pres().gen(comps[c].gen).name;
        if (starts(g, "Bb[")) kind[c] = comps[c].s ? 0 : 3;
        else if (starts(g, "B[")) kind[c] = comps[c].s ? 2 : 1;
        else if (starts(g, "Psib[") && !comps[c].s) kind[c] = 2;
    }
    auto accept = [&, t](const FMono& m) {
        int F = 0, bb = 0;
        for (auto id : m) {
            if (fock::mode_k(id) != 1) continue;
            int k = kind[fock::mode_comp(id)];
            if (k == 1 || k == 2) ++F;
            else if (k == 3) ++bb;
        }
        return F <= t.D && bb <= t.Dbar;
    };
    return fock::build_fock(M, t.cutoff2, t.D + t.Dbar, accept);
}

namespace {
Vec unit(const FMono& m) { return Vec{{m, Gauss(1)}}; }

std::size_t count_nonzero(const Basis& B, const std::function<Vec(const Vec&)>& f)
{
    std::size_t bad = 0;
    for (auto& m : B.states)
        if (!vec_zero(f(unit(m)))) ++bad;
    return bad;
}
} // namespace

OpResidual commutator_residual(Evaluator& ev, const std::string& name, const ZeroMode& X, const ZeroMode& Y,
                               const ZeroMode* Z, const Basis& B)
{
    Gauss sign((X.odd && Y.odd) ? 1 : -1);
    OpResidual r{name, B.size(), 0};
    r.nonzero_columns = count_nonzero(B, [&](const Vec& v) {
        Vec out = apply(ev, X, apply(ev, Y, v));
        axpy(out, sign, apply(ev, Y, apply(ev, X, v)));
        if (Z) axpy(out, Gauss(-1), apply(ev, *Z, v));
        return out;
    });
    return r;
}

OpResidual square_residual(Evaluator& ev, const std::string& name, const ZeroMode& X, const Basis& B)
{
    OpResidual r{name, B.size(), 0};
    r.nonzero_columns = count_nonzero(B, [&](const Vec& v) { return apply(ev, X, apply(ev, X, v)); });
    return r;
}

bool BrstReport::ok() const
{
    for (auto& c : checks)
        if (!c.ok()) return false;
    return !negative_control.ok();
}

BrstReport brst_check(Evaluator& ev, const ZeroModes& z, const Basis& B)
{
    BrstReport rep;
    for (const SectorOps* s : {&z.plus, &z.minus}) {
        rep.checks.push_back(square_residual(ev, s->Q0.label + "^2", s->Q0, B));
        rep.checks.push_back(square_residual(ev, s->G0.label + "^2", s->G0, B));
        rep.checks.push_back(
            commutator_residual(ev, "[" + s->G0.label + ", " + s->Q0.label + "] - " + s->L0.label, s->G0, s->Q0,
                                &s->L0, B));
        rep.diagnostics.push_back(square_residual(ev, s->G0_literal.label + "^2", s->G0_literal, B));
        rep.diagnostics.push_back(commutator_residual(
            ev, "[" + s->G0_literal.label + ", " + s->Q0.label + "] - " + s->L0.label, s->G0_literal, s->Q0, &s->L0,
            B));
    }
    const ZeroMode* P[4] = {&z.plus.L0, &z.plus.J0, &z.plus.Q0, &z.plus.G0};
    const ZeroMode* M[4] = {&z.minus.L0, &z.minus.J0, &z.minus.Q0, &z.minus.G0};
    for (auto* x : P)
        for (auto* y : M)
            rep.checks.push_back(commutator_residual(ev, "[" + x->label + ", " + y->label + "]", *x, *y, nullptr, B));
    // drop the i from the J-term of Q0+
    ZeroMode bad = z.plus.Q0;
    bad.label = "Q0+ with real J-term";
    bad.terms[1].c = Gauss::frac(1, 2);
    rep.negative_control = square_residual(ev, bad.label + "^2", bad, B);
    return rep;
}

namespace {

struct Block {
    int weight2 = 0;
    std::vector<FMono> monos;
    std::map<FMono, std::size_t> index;
};

// dense matrix of op on a block; false if the image leaves it
bool block_matrix(Evaluator& ev, const ZeroMode& op, const Block& b, DMat& A)
{
    std::size_t n = b.monos.size();
    A.assign(n, DVec(n));
    bool closed = true;
    for (std::size_t c = 0; c < n; ++c) {
        Vec img = apply(ev, op, unit(b.monos[c]));
        for (auto& [m, x] : img) {
            auto it = b.index.find(m);
            if (it == b.index.end()) closed = false;
            else A[it->second][c] = x;
        }
    }
    return closed;
}

using Sub = std::vector<DVec>; // spanning vectors in block coordinates

DVec mul(const DMat& A, const DVec& u)
{
    std::size_t n = A.size();
    DVec y(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            if (!A[i][k].is_zero() && !u[k].is_zero()) y[i] += A[i][k] * u[k];
    return y;
}

// split the A-invariant span of U into generalized eigenspaces of A for the
// candidate eigenvalues; `nilpotent` is set when some (A - a) is not zero there
std::vector<std::pair<Q, Sub>> split(const DMat& A, const Sub& U, const std::vector<Q>& cands, bool* nilpotent)
{
    std::size_t n = A.size();
    std::vector<std::pair<Q, Sub>> out;
    std::size_t found = 0;
    for (auto& a : cands) {
        if (found == U.size()) break;
        // W_k = (A − a)^k U; kernels grow until stable
        Sub W = U;
        std::vector<DVec> ns;
        for (std::size_t k = 1; k <= U.size(); ++k) {
            for (auto& w : W) {
                DVec y = mul(A, w);
                for (std::size_t i = 0; i < n; ++i) y[i] -= Gauss(a) * w[i];
                w = std::move(y);
            }
            DMat Mx(n, DVec(U.size()));
            for (std::size_t c = 0; c < U.size(); ++c)
                for (std::size_t i = 0; i < n; ++i) Mx[i][c] = W[c][i];
            auto next = nullspace(Mx, U.size());
            if (k > 1 && next.size() == ns.size()) break;
            if (k > 1 && nilpotent) *nilpotent = true;
            ns = std::move(next);
        }
        if (ns.empty()) continue;
        Sub S;
        for (auto& cv : ns) {
            DVec v(n);
            for (std::size_t c = 0; c < U.size(); ++c)
                if (!cv[c].is_zero())
                    for (std::size_t i = 0; i < n; ++i)
                        if (!U[c][i].is_zero()) v[i] += cv[c] * U[c][i];
            S.push_back(std::move(v));
        }
        found += S.size();
        out.emplace_back(a, std::move(S));
    }
    return out;
}

Vec to_vec(const Block& b, const DVec& x)
{
    Vec v;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!x[i].is_zero()) v.emplace(b.monos[i], x[i]);
    return v;
}

} // namespace

Spectrum spectrum(Evaluator& ev, const ZeroModes& z, const Basis& B)
{
    const fock::Model& M = ev.model();
    std::map<int, Block> blocks;
    for (auto& m : B.states) {
        Block& b = blocks[M.weight2(m)];
        b.weight2 = M.weight2(m);
        b.index[m] = b.monos.size();
        b.monos.push_back(m);
    }
    Spectrum sp;
    for (auto& [w2, b] : blocks) {
        std::size_t n = b.monos.size();
        DMat Jp, Jm, Lp;
        sp.closed &= block_matrix(ev, z.plus.J0, b, Jp);
        sp.closed &= block_matrix(ev, z.minus.J0, b, Jm);
        sp.closed &= block_matrix(ev, z.plus.L0, b, Lp);
        // L0+ + L0- must act as w − ½(J0+ + J0-) on the block
        {
            DMat Lm;
            sp.closed &= block_matrix(ev, z.minus.L0, b, Lm);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t k = 0; k < n; ++k) {
                    Gauss want = (i == k) ? Gauss(Q(w2) / 2) : Gauss();
                    want -= (Jp[i][k] + Jm[i][k]) * Gauss::frac(1, 2);
                    if (Lp[i][k] + Lm[i][k] != want) sp.total_weight_ok = false;
                }
        }
        std::vector<Q> charges, weights;
        for (long q = -w2; q <= w2; ++q) charges.push_back(Q(q));
        for (long h = -2 * w2; h <= 2 * w2; ++h) {
            Q x(h, 2);
            x.canonicalize();
            weights.push_back(x);
        }
        Sub all;
        for (std::size_t i = 0; i < n; ++i) {
            DVec e(n);
            e[i] = Gauss(1);
            all.push_back(std::move(e));
        }
        std::size_t total = 0;
        bool jordan = false, charge_jordan = false;
        for (auto& [qp, U1] : split(Jp, all, charges, &charge_jordan))
            for (auto& [qm, U2] : split(Jm, U1, charges, &charge_jordan))
                for (auto& [hp, U3] : split(Lp, U2, weights, &jordan)) {
                    Cell c;
                    c.weight2 = w2;
                    c.qp = qp.get_num().get_si();
                    c.qm = qm.get_num().get_si();
                    c.hp = hp;
                    c.hm = Q(w2) / 2 - Q(qp + qm) / 2 - hp;
                    c.hm.canonicalize();
                    for (auto& x : U3) c.vectors.push_back(to_vec(b, x));
                    total += c.vectors.size();
                    sp.cells.push_back(std::move(c));
                }
        if (jordan) sp.l0_diagonalizable = false;
        if (charge_jordan) sp.j0_diagonalizable = false;
        if (total != n) sp.complete = false;
    }
    return sp;
}

std::size_t CohomologyTable::total() const
{
    std::size_t t = 0;
    for (auto& r : rows) t += r.h;
    return t;
}

namespace {
std::size_t rank_of(const std::vector<Vec>& vs)
{
    std::map<FMono, std::size_t> col;
    for (auto& v : vs)
        for (auto& [m, c] : v) col.emplace(m, 0);
    std::size_t k = 0;
    for (auto& [m, i] : col) i = k++;
    DMat A;
    for (auto& v : vs) {
        DVec row(k);
        for (auto& [m, c] : v) row[col[m]] = c;
        A.push_back(std::move(row));
    }
    return rank(std::move(A));
}
} // namespace

CohomologyTable cohomology(Evaluator& ev, const ZeroModes& z, const Basis& B, const Spectrum& sp, Diff d,
                           const Q& hp, const Q& hm)
{
    CohomologyTable t;
    t.diff = d;
    t.hp = hp;
    t.hm = hm;
    ZeroMode D = differential(z, d);
    // key: (degree, spectator grading)
    std::map<std::pair<long, long>, std::vector<Vec>> groups;
    std::map<std::pair<long, long>, std::pair<long, long>> charges;
    for (auto& c : sp.cells) {
        if (c.hp != hp || c.hm != hm) continue;
        if (c.weight2 > B.cutoff2 - 2) t.stable = false;
        std::pair<long, long> key;
        switch (d) {
        case Diff::Qplus: key = {c.qp, c.qm}; break;
        case Diff::Qminus: key = {c.qm, c.qp}; break;
        case Diff::QB: key = {c.qp + c.qm, 0}; break;
        case Diff::QA: key = {c.qp - c.qm, 0}; break;
        }
        auto& g = groups[key];
        g.insert(g.end(), c.vectors.begin(), c.vectors.end());
        charges[key] = {c.qp, c.qm};
    }
    std::map<std::pair<long, long>, std::size_t> rank_out;
    for (auto& [key, vs] : groups) {
        std::vector<Vec> imgs;
        for (auto& v : vs) imgs.push_back(apply(ev, D, v));
        rank_out[key] = rank_of(imgs);
        auto next = groups.find({key.first + 1, key.second});
        std::vector<Vec> target = next == groups.end() ? std::vector<Vec>{} : next->second;
        std::size_t base = rank_of(target);
        target.insert(target.end(), imgs.begin(), imgs.end());
        if (rank_of(target) != base) t.closed = false;
    }
    for (auto& [key, vs] : groups) {
        CohomologyRow r;
        r.degree = key.first;
        if (d == Diff::Qplus || d == Diff::Qminus) {
            r.qp = charges[key].first;
            r.qm = charges[key].second;
        }
        r.dim = vs.size();
        r.rank_out = rank_out[key];
        auto prev = rank_out.find({key.first - 1, key.second});
        r.rank_in = prev == rank_out.end() ? 0 : prev->second;
        r.h = r.dim - r.rank_out - r.rank_in;
        t.euler += (key.first % 2 == 0 ? 1 : -1) * long(r.dim);
        t.rows.push_back(r);
    }
    return t;
}

} // namespace lf::twist
