#include "lf/fock.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

namespace lf::fock {

void axpy(Vec& y, const Gauss& a, const Vec& x)
{
    if (a.is_zero()) return;
    for (auto& [m, c] : x) {
        auto it = y.find(m);
        Gauss v = a * c;
        if (it == y.end()) {
            if (!v.is_zero()) y.emplace(m, v);
            continue;
        }
        it->second += v;
        if (it->second.is_zero()) y.erase(it);
    }
}

Vec scaled(const Vec& x, const Gauss& a)
{
    Vec r;
    axpy(r, a, x);
    return r;
}

bool vec_zero(const Vec& v) { return v.empty(); }

std::string vec_str(const Vec& v, const std::function<std::string(ModeId)>& name)
{
    if (v.empty()) return "0";
    std::string s;
    for (auto& [m, c] : v) {
        if (!s.empty()) s += " + ";
        s += "(" + c.str() + ")";
        for (ModeId x : m) s += " " + name(x);
        if (m.empty()) s += "|0>";
    }
    return s;
}

// ---------------------------------------------------------------- model

Model::Model(const Presentation& p) : p_(p)
{
    std::vector<std::uint32_t> gens;
    for (std::uint32_t g = 0; g < p.size(); ++g) {
        const auto& G = p.gen(g);
        if (G.kind != GenKind::ordinary) throw std::invalid_argument("fock: function generators are not free fields");
        comps_.push_back({G.name, G.odd, G.weight2, g, false});
        comps_.push_back({"S(" + G.name + ")", !G.odd, G.weight2 + 1, g, true});
    }
    std::size_t nc = comps_.size();
    c0_.assign(nc, std::vector<Gauss>(nc));
    c1_.assign(nc, std::vector<Gauss>(nc));
    auto constant_part = [&](const Br& b, Gauss& alpha, Gauss& beta) {
        alpha = beta = Gauss();
        for (auto& [m, st] : b.terms()) {
            if (even_power(m, LAM) != 0 || st.size() != 1 || !st.terms().begin()->first.empty())
                throw std::invalid_argument("fock: generator brackets must be constants a + b*chi");
            Gauss c = st.terms().begin()->second.const_value();
            if (odd_power(m, LAM)) beta = c;
            else alpha = c;
        }
    };
    for (std::uint32_t g = 0; g < p.size(); ++g)
        for (std::uint32_t h = 0; h < p.size(); ++h) {
            Gauss al, be;
            if (auto b = p.bracket(g, h)) {
                constant_part(*b, al, be);
            } else if (auto b2 = p.bracket(h, g)) {
                // constant skew image: (−1)^{gh}(α − βχ)
                constant_part(*b2, al, be);
                be = -be;
                if (p.gen(g).odd && p.gen(h).odd) {
                    al = -al;
                    be = -be;
                }
            } else {
                continue;
            }
            bool godd = p.gen(g).odd;
            std::uint32_t x = 2 * g, sx = 2 * g + 1, y = 2 * h, sy = 2 * h + 1;
            // [a_Λ b] = [Sa_λ b] + χ[a_λ b]; [a_Λ Sb] = (−1)^{a+1}(λβ + χα)
            c0_[x][y] = be;
            c0_[sx][y] = al;
            c0_[x][sy] = godd ? al : -al;
            c1_[sx][sy] = godd ? be : -be;
        }
}

std::uint32_t Model::comp_of(std::uint32_t gen, bool s) const { return 2 * gen + (s ? 1 : 0); }

int Model::weight2(const FMono& m) const
{
    int w = 0;
    for (ModeId x : m) w += weight2(x);
    return w;
}

int Model::weight2(const Vec& v) const
{
    int w = -1;
    for (auto& [m, c] : v) w = std::max(w, weight2(m));
    return w;
}

std::string Model::mode_name(ModeId m) const
{
    return comps_[mode_comp(m)].name + "_(-" + std::to_string(mode_k(m)) + ")";
}

Gauss Model::mode_commutator(std::uint32_t x, long m, std::uint32_t y, long n) const
{
    Gauss r;
    if (m + n == -1) r += c0_[x][y];
    if (m + n == 0 && m != 0) r += c1_[x][y] * Gauss(m);
    return r;
}

Vec Model::mode(std::uint32_t comp, long n, const FMono& v) const
{
    Vec r;
    bool xodd = comps_[comp].odd;
    if (n < 0) {
        if (-n >= 4096) throw ResourceError("fock: mode index out of range");
        ModeId id = mode_id(comp, std::uint32_t(-n));
        auto pos = std::upper_bound(v.begin(), v.end(), id);
        if (xodd && pos != v.begin() && *(pos - 1) == id) return r;
        int before = 0;
        if (xodd)
            for (auto it = v.begin(); it != pos; ++it) before += odd(*it);
        FMono m(v.begin(), pos);
        m.push_back(id);
        m.insert(m.end(), pos, v.end());
        r.emplace(std::move(m), Gauss((before & 1) ? -1 : 1));
        return r;
    }
    int before = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        ModeId y = v[i];
        if (i > 0 && v[i - 1] == y) { // bosonic repeat: same term as its first copy
            before += odd(v[i - 1]);
            continue;
        }
        std::size_t mult = 1;
        while (i + mult < v.size() && v[i + mult] == y) ++mult;
        Gauss c = mode_commutator(comp, n, mode_comp(y), -long(mode_k(y)));
        if (!c.is_zero()) {
            if (xodd && (before & 1)) c = -c;
            c *= Gauss(long(mult));
            FMono m(v.begin(), v.begin() + long(i));
            m.insert(m.end(), v.begin() + long(i) + 1, v.end());
            auto it = r.find(m);
            if (it == r.end()) r.emplace(std::move(m), c);
            else {
                it->second += c;
                if (it->second.is_zero()) r.erase(it);
            }
        }
        before += odd(y);
    }
    return r;
}

Vec Model::mode(std::uint32_t comp, long n, const Vec& v) const
{
    Vec r;
    for (auto& [m, c] : v) axpy(r, c, mode(comp, n, m));
    return r;
}

// ---------------------------------------------------------------- fields

Field vac() { return std::make_shared<Node>(); }

Field leaf(const Model& M, std::uint32_t comp, std::uint32_t t)
{
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::leaf;
    n->comp = comp;
    n->t = t;
    n->odd = M.components()[comp].odd;
    n->weight2 = M.components()[comp].weight2 + 2 * int(t);
    return n;
}

Field normal(const Field& a, const Field& b)
{
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::no;
    n->a = a;
    n->b = b;
    n->odd = a->odd != b->odd;
    n->weight2 = a->weight2 + b->weight2;
    return n;
}

Field sum(const std::vector<std::pair<Gauss, Field>>& terms)
{
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::sum;
    bool first = true;
    for (auto& [c, f] : terms) {
        if (c.is_zero()) continue;
        if (f->kind == Node::Kind::sum && f->terms.empty()) continue;
        if (!first && f->odd != n->odd) throw std::invalid_argument("fock: inhomogeneous parity in sum");
        n->odd = f->odd;
        n->weight2 = first ? f->weight2 : std::max(n->weight2, f->weight2);
        n->terms.emplace_back(c, f);
        first = false;
    }
    return n;
}

Field apply_S(const Model& M, const Field& f)
{
    switch (f->kind) {
    case Node::Kind::vac: return sum({});
    case Node::Kind::leaf: {
        const Component& c = M.components()[f->comp];
        if (!c.s) return leaf(M, M.comp_of(c.gen, true), f->t);
        return leaf(M, M.comp_of(c.gen, false), f->t + 1);
    }
    case Node::Kind::no:
        return sum({{Gauss(1), normal(apply_S(M, f->a), f->b)},
                    {Gauss(f->a->odd ? -1 : 1), normal(f->a, apply_S(M, f->b))}});
    case Node::Kind::sum: {
        std::vector<std::pair<Gauss, Field>> t;
        for (auto& [c, g] : f->terms) t.emplace_back(c, apply_S(M, g));
        return sum(t);
    }
    }
    return sum({});
}

Field apply_T(const Model& M, const Field& f)
{
    switch (f->kind) {
    case Node::Kind::vac: return sum({});
    case Node::Kind::leaf: return leaf(M, f->comp, f->t + 1);
    case Node::Kind::no:
        return sum({{Gauss(1), normal(apply_T(M, f->a), f->b)}, {Gauss(1), normal(f->a, apply_T(M, f->b))}});
    case Node::Kind::sum: {
        std::vector<std::pair<Gauss, Field>> t;
        for (auto& [c, g] : f->terms) t.emplace_back(c, apply_T(M, g));
        return sum(t);
    }
    }
    return sum({});
}

Field from_state(const Model& M, const State& s)
{
    std::vector<std::pair<Gauss, Field>> terms;
    for (auto& [m, c] : s.terms()) {
        if (!c.is_const()) throw std::invalid_argument("fock: symbolic coefficient " + c.str());
        Field f = vac();
        for (std::size_t i = m.size(); i-- > 0;) {
            Letter l = m[i];
            Field x = leaf(M, M.comp_of(letter_gen(l), letter_s(l) != 0), letter_t(l));
            f = (i + 1 == m.size()) ? x : normal(x, f);
        }
        terms.emplace_back(c.const_value(), f);
    }
    return sum(terms);
}

// ---------------------------------------------------------------- evaluation

Vec Evaluator::apply(const Field& f, long n, const Vec& v)
{
    Vec r;
    for (auto& [m, c] : v) axpy(r, c, apply(f, n, m));
    return r;
}

Vec Evaluator::apply(const Field& f, long n, const FMono& v)
{
    const Node* key = f.get();
    auto mk = std::make_tuple(key, n, v);
    if (auto it = memo_.find(mk); it != memo_.end()) return it->second;
    keep_.emplace(key, f);
    Vec r;
    int wv = M_.weight2(v);
    switch (f->kind) {
    case Node::Kind::vac:
        if (n == -1) r.emplace(v, Gauss(1));
        break;
    case Node::Kind::leaf: {
        // (T^t X)_(n) = (−1)^t n(n−1)…(n−t+1) X_(n−t)
        Gauss c(1);
        for (std::uint32_t i = 0; i < f->t; ++i) c *= Gauss(-(n - long(i)));
        if (!c.is_zero()) r = scaled(M_.mode(f->comp, n - long(f->t), v), c);
        break;
    }
    case Node::Kind::no: {
        const Field &a = f->a, &b = f->b;
        // Σ_k a_(−1−k) b_(n+k) v
        for (long k = 0; 2 * (n + k) <= wv + b->weight2 - 2; ++k) {
            Vec bv = apply(b, n + k, v);
            if (!bv.empty()) axpy(r, Gauss(1), apply(a, -1 - k, bv));
        }
        // (−1)^{ab} Σ_k b_(n−1−k) a_(k) v
        Gauss sg((a->odd && b->odd) ? -1 : 1);
        for (long k = 0; 2 * k <= wv + a->weight2 - 2; ++k) {
            Vec av = apply(a, k, v);
            if (!av.empty()) axpy(r, sg, apply(b, n - 1 - k, av));
        }
        break;
    }
    case Node::Kind::sum:
        for (auto& [c, g] : f->terms) axpy(r, c, apply(g, n, v));
        break;
    }
    memo_.emplace(std::move(mk), r);
    return r;
}

Vec Evaluator::apply_mode(const Field& f, long j, int J, const Vec& v)
{
    if (J) return apply(f, j, v);
    Field s = apply_S(M_, f);
    keep_.emplace(s.get(), s);
    return apply(s, j, v);
}

// ---------------------------------------------------------------- basis

std::size_t memory_budget()
{
    if (const char* e = std::getenv("LF_FOCK_MAX_STATES")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(e, &end, 10);
        if (end && *end == 0 && v > 0) return std::size_t(v);
    }
    return 2000000;
}

Basis build_fock(const Model& M, int cutoff2, int zero_mode_bound, const std::function<bool(const FMono&)>& accept)
{
    if (cutoff2 < 0) throw std::invalid_argument("fock: negative cutoff");
    std::vector<ModeId> modes;
    for (std::uint32_t c = 0; c < M.components().size(); ++c)
        for (std::uint32_t k = 1;; ++k) {
            ModeId id = mode_id(c, k);
            if (M.weight2(id) > cutoff2) break;
            modes.push_back(id);
        }
    std::sort(modes.begin(), modes.end());
    std::size_t budget = memory_budget();
    Basis B;
    B.cutoff2 = cutoff2;
    FMono cur;
    std::function<void(std::size_t, int, int)> rec = [&](std::size_t i, int w, int zeros) {
        if (i == modes.size()) {
            if (accept && !accept(cur)) return;
            if (B.states.size() >= budget)
                throw ResourceError("fock: basis exceeds memory budget of " + std::to_string(budget) +
                                    " states (set LF_FOCK_MAX_STATES)");
            B.states.push_back(cur);
            return;
        }
        ModeId id = modes[i];
        int wi = M.weight2(id);
        rec(i + 1, w, zeros);
        std::size_t pushed = 0;
        int maxmult = M.odd(id) ? 1 : 1 << 20;
        for (int k = 1; k <= maxmult; ++k) {
            if (w + k * wi > cutoff2) break;
            if (wi == 0 && zeros + k > zero_mode_bound) break;
            cur.push_back(id);
            ++pushed;
            rec(i + 1, w + k * wi, zeros + (wi == 0 ? k : 0));
        }
        cur.resize(cur.size() - pushed);
    };
    rec(0, 0, 0);
    std::stable_sort(B.states.begin(), B.states.end(), [&](const FMono& a, const FMono& b) {
        int wa = M.weight2(a), wb = M.weight2(b);
        return wa != wb ? wa < wb : a < b;
    });
    for (std::size_t i = 0; i < B.states.size(); ++i) B.index[B.states[i]] = i;
    return B;
}

Vec project(const Vec& v, const Basis& B, std::size_t* dropped)
{
    Vec r;
    for (auto& [m, c] : v) {
        if (B.contains(m)) r.emplace(m, c);
        else if (dropped) ++*dropped;
    }
    return r;
}

// ---------------------------------------------------------------- matrices

bool Matrix::is_zero() const
{
    for (auto& c : col)
        if (!c.empty()) return false;
    return true;
}

std::size_t Matrix::nnz() const
{
    std::size_t k = 0;
    for (auto& c : col) k += c.size();
    return k;
}

Matrix Matrix::operator*(const Matrix& o) const
{
    Matrix r(n);
    for (std::size_t j = 0; j < n; ++j)
        for (auto& [k, b] : o.col[j])
            for (auto& [i, a] : col[k]) {
                auto& slot = r.col[j][i];
                slot += a * b;
                if (slot.is_zero()) r.col[j].erase(i);
            }
    return r;
}

Matrix& Matrix::operator+=(const Matrix& o)
{
    for (std::size_t j = 0; j < n; ++j)
        for (auto& [i, v] : o.col[j]) {
            auto& slot = col[j][i];
            slot += v;
            if (slot.is_zero()) col[j].erase(i);
        }
    return *this;
}

Matrix Matrix::operator-(const Matrix& o) const
{
    Matrix r = *this;
    r += o.scaled(Gauss(-1));
    return r;
}

Matrix Matrix::scaled(const Gauss& a) const
{
    Matrix r(n);
    if (a.is_zero()) return r;
    for (std::size_t j = 0; j < n; ++j)
        for (auto& [i, v] : col[j]) r.col[j][i] = v * a;
    return r;
}

std::vector<Gauss> Matrix::apply(const std::vector<Gauss>& x) const
{
    std::vector<Gauss> y(n);
    for (std::size_t j = 0; j < n; ++j) {
        if (x[j].is_zero()) continue;
        for (auto& [i, v] : col[j]) y[i] += v * x[j];
    }
    return y;
}

std::vector<std::tuple<std::size_t, std::size_t, Gauss>> Matrix::entries() const
{
    std::vector<std::tuple<std::size_t, std::size_t, Gauss>> e;
    for (std::size_t j = 0; j < n; ++j)
        for (auto& [i, v] : col[j]) e.emplace_back(i, j, v);
    std::sort(e.begin(), e.end(), [](auto& a, auto& b) {
        return std::get<0>(a) != std::get<0>(b) ? std::get<0>(a) < std::get<0>(b) : std::get<1>(a) < std::get<1>(b);
    });
    return e;
}

Matrix graded_commutator(const Matrix& a, bool a_odd, const Matrix& b, bool b_odd)
{
    Matrix r = a * b;
    Matrix ba = b * a;
    r += ba.scaled(Gauss((a_odd && b_odd) ? 1 : -1));
    return r;
}

Matrix operator_matrix(Evaluator& ev, const Field& f, long j, int J, const Basis& B)
{
    Matrix m(B.size());
    for (std::size_t c = 0; c < B.size(); ++c) {
        Vec v = ev.apply_mode(f, j, J, Vec{{B.states[c], Gauss(1)}});
        for (auto& [mono, x] : v) {
            auto it = B.index.find(mono);
            if (it != B.index.end()) m.col[c][it->second] = x;
        }
    }
    return m;
}

std::map<std::pair<std::uint32_t, std::uint32_t>, Vec> commutator_structure(Evaluator& ev, const Field& a,
                                                                              const Field& b, const Basis& B)
{
    Vec vacv{{FMono{}, Gauss(1)}};
    std::size_t dropped = 0;
    Vec bv = project(ev.apply(b, -1, vacv), B, &dropped);
    if (dropped) throw Underdetermined("fock: the right argument leaves the truncated module; raise the cutoff");
    std::map<std::pair<std::uint32_t, std::uint32_t>, Vec> out;
    for (long j = 0; 2 * j <= a->weight2 + b->weight2 + 1; ++j)
        for (int J = 0; J <= 1; ++J) {
            bool modd = a->odd != (J == 0);
            Vec t1 = project(ev.apply_mode(a, j, J, bv), B);
            Vec av = project(ev.apply_mode(a, j, J, vacv), B);
            Vec t2 = project(ev.apply(b, -1, av), B);
            axpy(t1, Gauss((modd && b->odd) ? 1 : -1), t2);
            if (!t1.empty()) out[{std::uint32_t(j), std::uint32_t(J)}] = t1;
        }
    return out;
}

Comparison compare_with_engine(Engine& e, Evaluator& ev, const State& a, const State& b, const Basis& B)
{
    Comparison cmp;
    const Model& M = ev.model();
    Field fa = from_state(M, a), fb = from_state(M, b);
    auto oracle = commutator_structure(ev, fa, fb, B);
    Br br = e.bracket(a, b);
    std::set<std::pair<std::uint32_t, std::uint32_t>> keys;
    for (auto& [k, v] : oracle) keys.insert(k);
    for (auto& [m, c] : br.terms()) keys.insert({even_power(m, LAM), odd_power(m, LAM)});
    for (auto& k : keys) {
        ++cmp.modes_checked;
        State es = mode_extract(br, LAM, k.first, k.second);
        Vec ev_vec = ev.state(es);
        Vec diff = ev_vec;
        auto it = oracle.find(k);
        if (it != oracle.end()) axpy(diff, Gauss(-1), it->second);
        if (!diff.empty()) {
            if (cmp.mismatches++ == 0) {
                std::ostringstream os;
                os << "mode (" << k.first << "|" << k.second << "): engine - oracle = "
                   << vec_str(diff, [&](ModeId x) { return M.mode_name(x); });
                cmp.first_mismatch = os.str();
            }
        }
    }
    return cmp;
}

namespace {
Field field_of_vec(const Model& M, const Vec& v)
{
    std::vector<std::pair<Gauss, Field>> terms;
    for (auto& [m, c] : v) {
        Field f = vac();
        Gauss k = c;
        for (std::size_t i = m.size(); i-- > 0;) {
            std::uint32_t t = mode_k(m[i]) - 1;
            k /= Gauss(Q(factorial(t)));
            Field x = leaf(M, mode_comp(m[i]), t);
            f = (i + 1 == m.size()) ? x : normal(x, f);
        }
        terms.emplace_back(k, f);
    }
    return sum(terms);
}

long binom_long(long m, long j)
{
    // generalized binomial for integer m (possibly negative)
    Q r(1);
    for (long i = 0; i < j; ++i) r = r * Q(m - i) / Q(i + 1);
    return r.get_num().get_si();
}
} // namespace

Comparison check_borcherds(Evaluator& ev, const Field& a, const Field& b, long m, long n, const Basis& B)
{
    Comparison cmp;
    const Model& M = ev.model();
    Vec vacv{{FMono{}, Gauss(1)}};
    Vec bstate = ev.apply(b, -1, vacv);
    std::vector<std::pair<long, Field>> prods;
    for (long j = 0; 2 * j <= a->weight2 + b->weight2; ++j) {
        Vec ab = ev.apply(a, j, bstate);
        if (!ab.empty()) prods.emplace_back(j, field_of_vec(M, ab));
    }
    Gauss sg((a->odd && b->odd) ? -1 : 1);
    for (auto& v0 : B.states) {
        ++cmp.modes_checked;
        Vec v{{v0, Gauss(1)}};
        Vec lhs = ev.apply(a, m, ev.apply(b, n, v));
        axpy(lhs, -sg, ev.apply(b, n, ev.apply(a, m, v)));
        for (auto& [j, f] : prods) axpy(lhs, Gauss(-binom_long(m, j)), ev.apply(f, m + n - j, v));
        if (!lhs.empty() && cmp.mismatches++ == 0)
            cmp.first_mismatch = "on " + vec_str(v, [&](ModeId x) { return M.mode_name(x); }) + ": " +
                                 vec_str(lhs, [&](ModeId x) { return M.mode_name(x); });
    }
    return cmp;
}

std::string dump_matrix(const Matrix& m)
{
    std::ostringstream os;
    os << "# sparse " << m.n << " " << m.n << " " << m.nnz() << "\n";
    for (auto& [i, j, v] : m.entries()) os << i << " " << j << " " << v.re.get_str() << " " << v.im.get_str() << "\n";
    return os.str();
}

} // namespace lf::fock
