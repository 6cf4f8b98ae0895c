#include "lf/geometry.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace lf::geo {

namespace {

int popc(std::uint32_t m) { return std::popcount(m); }
// (−1)^{#{i ∈ a, j ∈ b : i > j}} for dx^a ∧ dx^b
int wedge_sign(std::uint32_t a, std::uint32_t b)
{
    int n = 0;
    for (std::uint32_t j = 0; j < 32; ++j)
        if (b >> j & 1u) n += popc(a & ~((2u << j) - 1u));
    return n % 2 ? -1 : 1;
}
int below(std::uint32_t mask, int j) { return popc(mask & ((1u << j) - 1u)); }

std::string default_name(int i) { return "x" + std::to_string(i); }

} // namespace

// ---------------------------------------------------------------- Poly

Poly Poly::constant(int dim, const Gauss& c)
{
    Poly p(dim);
    p.add_term(Exp(dim, 0), c);
    return p;
}

Poly Poly::var(int dim, int i)
{
    Poly p(dim);
    Exp e(dim, 0);
    e.at(i) = 1;
    p.add_term(e, Gauss(1));
    return p;
}

Poly Poly::z(int dim, int a) { return var(dim, 2 * a) + var(dim, 2 * a + 1) * Gauss::I(); }
Poly Poly::zbar(int dim, int a) { return var(dim, 2 * a) - var(dim, 2 * a + 1) * Gauss::I(); }

bool Poly::is_const() const
{
    if (t_.empty()) return true;
    if (t_.size() != 1) return false;
    auto& e = t_.begin()->first;
    return std::all_of(e.begin(), e.end(), [](int k) { return k == 0; });
}

Gauss Poly::const_value() const
{
    if (!is_const()) throw std::logic_error("Poly: not a constant");
    return t_.empty() ? Gauss() : t_.begin()->second;
}

int Poly::degree() const
{
    int d = -1;
    for (auto& [e, c] : t_) {
        int s = 0;
        for (int k : e) s += k;
        d = std::max(d, s);
    }
    return d;
}

void Poly::add_term(const Exp& e, const Gauss& c)
{
    if (c.is_zero()) return;
    if (dim_ == 0) dim_ = int(e.size());
    auto it = t_.find(e);
    if (it == t_.end()) {
        t_.emplace(e, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) t_.erase(it);
}

Poly& Poly::operator+=(const Poly& o)
{
    dim_ = std::max(dim_, o.dim_);
    for (auto& [e, c] : o.t_) add_term(e, c);
    return *this;
}

Poly& Poly::operator-=(const Poly& o)
{
    dim_ = std::max(dim_, o.dim_);
    for (auto& [e, c] : o.t_) add_term(e, -c);
    return *this;
}

Poly& Poly::operator*=(const Gauss& c)
{
    if (c.is_zero()) {
        t_.clear();
        return *this;
    }
    for (auto& [e, v] : t_) v *= c;
    return *this;
}

Poly Poly::operator-() const
{
    Poly r = *this;
    return r *= Gauss(-1);
}

Poly operator*(const Poly& a, const Poly& b)
{
    Poly r(std::max(a.dim_, b.dim_));
    for (auto& [ea, ca] : a.t_)
        for (auto& [eb, cb] : b.t_) {
            Poly::Exp e(ea.size());
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            r.add_term(e, ca * cb);
        }
    return r;
}

Poly Poly::d(int i) const
{
    Poly r(dim_);
    for (auto& [e, c] : t_) {
        if (e[i] == 0) continue;
        Exp f = e;
        --f[i];
        r.add_term(f, c * Gauss(e[i]));
    }
    return r;
}

Poly Poly::conj() const
{
    Poly r(dim_);
    for (auto& [e, c] : t_) r.add_term(e, c.conj());
    return r;
}

std::string Poly::str(const std::vector<std::string>& names) const
{
    if (t_.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
        auto& [e, c] = *it;
        std::string m;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (!m.empty()) m += "*";
            m += i < names.size() ? names[i] : default_name(int(i));
            if (e[i] > 1) m += "^" + std::to_string(e[i]);
        }
        Gauss v = c;
        bool neg = !v.compound() && ((v.is_real() && sgn(v.re) < 0) || (sgn(v.re) == 0 && sgn(v.im) < 0));
        if (neg) v = -v;
        std::string cs = v.compound() ? "(" + v.str() + ")" : v.str();
        std::string term = m.empty() ? cs : (v.is_one() ? m : cs + "*" + m);
        if (first) out = neg ? "-" + term : term;
        else out += (neg ? " - " : " + ") + term;
        first = false;
    }
    return out;
}

Poly random_poly(int dim, int degree, std::mt19937_64& rng, int max_terms)
{
    std::uniform_int_distribution<int> nterms(1, max_terms), num(-3, 3), den(1, 2), deg(0, degree),
        var(0, dim - 1), coin(0, 3);
    Poly p(dim);
    int n = nterms(rng);
    for (int t = 0; t < n; ++t) {
        Poly::Exp e(dim, 0);
        int k = deg(rng);
        for (int s = 0; s < k; ++s) ++e[var(rng)];
        Q re(num(rng), den(rng));
        re.canonicalize();
        Q im(0);
        if (coin(rng) == 0) {
            im = Q(num(rng), den(rng));
            im.canonicalize();
        }
        p.add_term(e, Gauss(re, im));
    }
    return p;
}

namespace {

struct PolyParser {
    const std::string& s;
    const std::vector<std::string>& names;
    std::size_t i = 0;
    int dim;

    [[noreturn]] void fail(const std::string& msg) const
    {
        throw std::runtime_error("polynomial: " + msg + " at column " + std::to_string(i + 1) + " in '" + s + "'");
    }
    void ws()
    {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool eat(char c)
    {
        ws();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }
    Poly expr()
    {
        Poly r = term();
        for (;;) {
            if (eat('+')) r += term();
            else if (eat('-')) r -= term();
            else return r;
        }
    }
    Poly term()
    {
        Poly r = power();
        while (eat('*')) r = r * power();
        return r;
    }
    Poly power()
    {
        if (eat('-')) return -power();
        Poly b = primary();
        if (eat('^')) {
            ws();
            std::size_t st = i;
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
            if (st == i) fail("expected exponent");
            int k = std::stoi(s.substr(st, i - st));
            Poly r = Poly::constant(dim, Gauss(1));
            for (int t = 0; t < k; ++t) r = r * b;
            return r;
        }
        return b;
    }
    Poly primary()
    {
        ws();
        if (i >= s.size()) fail("unexpected end");
        if (eat('(')) {
            Poly r = expr();
            if (!eat(')')) fail("expected ')'");
            return r;
        }
        if (std::isdigit(static_cast<unsigned char>(s[i]))) {
            std::size_t st = i;
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
            Q v(s.substr(st, i - st));
            ws();
            if (i + 1 < s.size() && s[i] == '/' && std::isdigit(static_cast<unsigned char>(s[i + 1]))) {
                ++i;
                std::size_t d0 = i;
                while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
                Q den(s.substr(d0, i - d0));
                if (den == 0) fail("zero denominator");
                v /= den;
            }
            return Poly::constant(dim, Gauss(v));
        }
        if (std::isalpha(static_cast<unsigned char>(s[i])) || s[i] == '_') {
            std::size_t st = i;
            while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
            std::string w = s.substr(st, i - st);
            for (std::size_t k = 0; k < names.size(); ++k)
                if (names[k] == w) return Poly::var(dim, int(k));
            if (w == "i") return Poly::constant(dim, Gauss::I());
            i = st;
            fail("unknown name '" + w + "'");
        }
        fail(std::string("unexpected '") + s[i] + "'");
    }
};

} // namespace

Poly parse_poly(const std::string& text, const std::vector<std::string>& names)
{
    PolyParser p{text, names, 0, int(names.size())};
    Poly r = p.expr();
    p.ws();
    if (p.i != text.size()) p.fail("trailing input");
    if (r.dim() == 0) r = Poly(int(names.size())) + r;
    return r;
}

// ---------------------------------------------------------------- Form

void Form::add(std::uint32_t mask, const Poly& p)
{
    if (p.is_zero()) return;
    dim_ = std::max(dim_, p.dim());
    auto it = t_.find(mask);
    if (it == t_.end()) {
        t_.emplace(mask, p);
        return;
    }
    it->second += p;
    if (it->second.is_zero()) t_.erase(it);
}

Form Form::function(const Poly& f)
{
    Form r(f.dim());
    r.add(0, f);
    return r;
}

Form Form::one_form(const std::vector<Poly>& xi)
{
    Form r(int(xi.size()));
    for (std::size_t i = 0; i < xi.size(); ++i) r.add(1u << i, xi[i]);
    return r;
}

Form Form::basis(int dim, std::uint32_t mask, const Poly& c)
{
    Form r(dim);
    r.add(mask, c);
    return r;
}

Poly Form::at(std::uint32_t mask) const
{
    auto it = t_.find(mask);
    return it == t_.end() ? Poly(dim_) : it->second;
}

Form Form::part(int degree) const
{
    Form r(dim_);
    for (auto& [m, p] : t_)
        if (popc(m) == degree) r.add(m, p);
    return r;
}

Poly Form::top() const { return at(dim_ >= 32 ? 0 : (1u << dim_) - 1u); }

Form& Form::operator+=(const Form& o)
{
    dim_ = std::max(dim_, o.dim_);
    for (auto& [m, p] : o.t_) add(m, p);
    return *this;
}

Form& Form::operator-=(const Form& o)
{
    dim_ = std::max(dim_, o.dim_);
    for (auto& [m, p] : o.t_) add(m, -p);
    return *this;
}

Form& Form::operator*=(const Gauss& c)
{
    Form r(dim_);
    for (auto& [m, p] : t_) r.add(m, p * c);
    return *this = r;
}

Form Form::times(const Poly& f) const
{
    Form r(std::max(dim_, f.dim()));
    for (auto& [m, p] : t_) r.add(m, p * f);
    return r;
}

Form Form::wedge(const Form& o) const
{
    Form r(std::max(dim_, o.dim_));
    for (auto& [a, pa] : t_)
        for (auto& [b, pb] : o.t_) {
            if (a & b) continue;
            Poly c = pa * pb;
            if (wedge_sign(a, b) < 0) c = -c;
            r.add(a | b, c);
        }
    return r;
}

Form Form::d() const
{
    Form r(dim_);
    for (auto& [m, p] : t_)
        for (int j = 0; j < dim_; ++j) {
            if (m >> j & 1u) continue;
            Poly dp = p.d(j);
            if (dp.is_zero()) continue;
            if (below(m, j) % 2) dp = -dp;
            r.add(m | (1u << j), dp);
        }
    return r;
}

Form Form::interior(const VecField& X) const
{
    Form r(dim_);
    for (auto& [m, p] : t_)
        for (int j = 0; j < dim_ && j < int(X.size()); ++j) {
            if (!(m >> j & 1u) || X[j].is_zero()) continue;
            Poly c = X[j] * p;
            if (below(m, j) % 2) c = -c;
            r.add(m & ~(1u << j), c);
        }
    return r;
}

Form Form::reversed() const
{
    Form r(dim_);
    for (auto& [m, p] : t_) {
        int k = popc(m);
        r.add(m, (k * (k - 1) / 2) % 2 ? -p : p);
    }
    return r;
}

Form Form::conj() const
{
    Form r(dim_);
    for (auto& [m, p] : t_) r.add(m, p.conj());
    return r;
}

std::vector<Poly> Form::one_form_components() const
{
    std::vector<Poly> xi(dim_, Poly(dim_));
    for (int i = 0; i < dim_; ++i) xi[i] = at(1u << i);
    return xi;
}

std::string Form::str(const std::vector<std::string>& names) const
{
    if (t_.empty()) return "0";
    std::string out;
    for (auto& [m, p] : t_) {
        if (!out.empty()) out += " + ";
        std::string b;
        for (int j = 0; j < 32; ++j)
            if (m >> j & 1u) b += (b.empty() ? "d" : "^d") + (j < int(names.size()) ? names[j] : default_name(j));
        std::string ps = p.str(names);
        out += b.empty() ? ps : "(" + ps + ")*" + b;
    }
    return out;
}

Form exp_nilpotent(const Form& w)
{
    Form r = Form::function(Poly::constant(w.dim(), Gauss(1)));
    Form pw = r;
    for (int k = 1; k <= w.dim(); ++k) {
        pw = pw.wedge(w) * Gauss(Q(1, k));
        if (pw.is_zero()) break;
        r += pw;
    }
    return r;
}

// ---------------------------------------------------------------- sections

ESection ESection::zero(int dim) { return {VecField(dim, Poly(dim)), std::vector<Poly>(dim, Poly(dim))}; }
ESection ESection::vector(const VecField& X) { return {X, std::vector<Poly>(X.size(), Poly(int(X.size())))}; }
ESection ESection::form(const std::vector<Poly>& xi) { return {VecField(xi.size(), Poly(int(xi.size()))), xi}; }

bool ESection::is_zero() const
{
    for (auto& p : X)
        if (!p.is_zero()) return false;
    for (auto& p : xi)
        if (!p.is_zero()) return false;
    return true;
}

ESection& ESection::operator+=(const ESection& o)
{
    for (std::size_t i = 0; i < X.size(); ++i) X[i] += o.X[i];
    for (std::size_t i = 0; i < xi.size(); ++i) xi[i] += o.xi[i];
    return *this;
}

ESection& ESection::operator-=(const ESection& o)
{
    for (std::size_t i = 0; i < X.size(); ++i) X[i] -= o.X[i];
    for (std::size_t i = 0; i < xi.size(); ++i) xi[i] -= o.xi[i];
    return *this;
}

ESection ESection::times(const Poly& f) const
{
    ESection r = *this;
    for (auto& p : r.X) p = p * f;
    for (auto& p : r.xi) p = p * f;
    return r;
}

ESection ESection::scaled(const Gauss& c) const
{
    ESection r = *this;
    for (auto& p : r.X) p *= c;
    for (auto& p : r.xi) p *= c;
    return r;
}

ESection ESection::conj() const
{
    ESection r = *this;
    for (auto& p : r.X) p = p.conj();
    for (auto& p : r.xi) p = p.conj();
    return r;
}

std::string ESection::str(const std::vector<std::string>& names) const
{
    std::string out;
    auto nm = [&](std::size_t i) { return i < names.size() ? names[i] : default_name(int(i)); };
    for (std::size_t i = 0; i < X.size(); ++i)
        if (!X[i].is_zero()) out += (out.empty() ? "" : " + ") + ("(" + X[i].str(names) + ")*d/d" + nm(i));
    for (std::size_t i = 0; i < xi.size(); ++i)
        if (!xi[i].is_zero()) out += (out.empty() ? "" : " + ") + ("(" + xi[i].str(names) + ")*d" + nm(i));
    return out.empty() ? "0" : out;
}

Poly apply_vector(const VecField& X, const Poly& f)
{
    Poly r(f.dim());
    for (std::size_t i = 0; i < X.size(); ++i)
        if (!X[i].is_zero()) r += X[i] * f.d(int(i));
    return r;
}

VecField lie_bracket(const VecField& X, const VecField& Y)
{
    VecField r(X.size());
    for (std::size_t j = 0; j < X.size(); ++j) r[j] = apply_vector(X, Y[j]) - apply_vector(Y, X[j]);
    return r;
}

ESection dorfman(const ESection& A, const ESection& B, const Form& H)
{
    int m = A.dim();
    ESection r = ESection::zero(m);
    r.X = lie_bracket(A.X, B.X);
    Form eta = Form::one_form(B.xi), xi = Form::one_form(A.xi);
    Form f = eta.d().interior(A.X) + eta.interior(A.X).d();
    f -= xi.d().interior(B.X);
    if (!H.is_zero()) f += H.interior(A.X).interior(B.X);
    Form one(m);
    one += f;
    auto c = one.part(1).one_form_components();
    for (int i = 0; i < m; ++i) r.xi[i] = i < int(c.size()) ? c[i] : Poly(m);
    return r;
}

Poly pairing(const ESection& A, const ESection& B)
{
    Poly r(A.dim());
    for (std::size_t i = 0; i < A.X.size(); ++i) {
        r += A.X[i] * B.xi[i];
        r += B.X[i] * A.xi[i];
    }
    return r * Gauss::frac(1, 2);
}

ESection D_of(const Poly& f)
{
    int m = f.dim();
    std::vector<Poly> xi(m);
    for (int i = 0; i < m; ++i) xi[i] = f.d(i);
    return ESection::form(xi);
}

namespace {

ESection random_section(int m, int degree, std::mt19937_64& rng)
{
    ESection s = ESection::zero(m);
    for (auto& p : s.X) p = random_poly(m, degree, rng, 2);
    for (auto& p : s.xi) p = random_poly(m, degree, rng, 2);
    return s;
}

bool vec_zero(const VecField& v)
{
    for (auto& p : v)
        if (!p.is_zero()) return false;
    return true;
}

} // namespace

std::vector<AxiomResidual> courant_axioms_check(const Form& H, int trials, std::uint64_t seed, int degree)
{
    int m = H.dim();
    if (m <= 0) throw std::invalid_argument("courant_axioms_check: H must carry its dimension");
    std::vector<AxiomResidual> out = {{"(1) [A,[B,C]] = [[A,B],C] + [B,[A,C]]"},
                                      {"(2) pi[A,B] = [piA, piB]"},
                                      {"(3) [A,fB] = f[A,B] + (piA f)B"},
                                      {"(4) piA<B,C> = <[A,B],C> + <B,[A,C]>"},
                                      {"(5) [A,B] + [B,A] = 2D<A,B>"},
                                      {"dorfman = courant + D<A,B>"},
                                      {"pi o D = 0"},
                                      {"<Df,Dg> = 0"}};
    std::mt19937_64 rng(seed);
    for (int t = 0; t < trials; ++t) {
        ESection A = random_section(m, degree, rng), B = random_section(m, degree, rng),
                 C = random_section(m, degree, rng);
        Poly f = random_poly(m, degree, rng), g = random_poly(m, degree, rng);
        ESection AB = dorfman(A, B, H), BA = dorfman(B, A, H), AC = dorfman(A, C, H);
        auto bump = [&](std::size_t k, bool ok) {
            ++out[k].trials;
            if (!ok) ++out[k].failures;
        };
        bump(0, (dorfman(A, dorfman(B, C, H), H) - dorfman(AB, C, H) - dorfman(B, AC, H)).is_zero());
        bump(1, vec_zero(AB.X) == vec_zero(lie_bracket(A.X, B.X)) &&
                    (ESection::vector(AB.X) - ESection::vector(lie_bracket(A.X, B.X))).is_zero());
        bump(2, (dorfman(A, B.times(f), H) - AB.times(f) - B.times(apply_vector(A.X, f))).is_zero());
        bump(3, apply_vector(A.X, pairing(B, C)) - pairing(AB, C) - pairing(B, AC) == Poly(m));
        ESection sym = AB + BA - D_of(pairing(A, B)).scaled(Gauss(2));
        bump(4, sym.is_zero());
        ESection courant = (AB - BA).scaled(Gauss::frac(1, 2));
        bump(5, (AB - courant - D_of(pairing(A, B))).is_zero());
        bump(6, vec_zero(D_of(f).X));
        bump(7, pairing(D_of(f), D_of(g)).is_zero());
    }
    return out;
}

Poly mukai(const Form& phi, const Form& psi)
{
    Form w = phi.reversed().wedge(psi);
    int m = std::max(phi.dim(), psi.dim());
    return w.at(m >= 32 ? 0 : (1u << m) - 1u);
}

Form clifford(const ESection& A, const Form& phi)
{
    return phi.interior(A.X) + Form::one_form(A.xi).wedge(phi);
}

// ---------------------------------------------------------------- matrices

DMat mat_mul(const DMat& a, const DMat& b)
{
    std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    DMat r(n, DVec(m));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < k; ++l) {
            if (a[i][l].is_zero()) continue;
            for (std::size_t j = 0; j < m; ++j)
                if (!b[l][j].is_zero()) r[i][j] += a[i][l] * b[l][j];
        }
    return r;
}

DMat mat_add(const DMat& a, const DMat& b, const Gauss& cb)
{
    DMat r = a;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) r[i][j] += cb * b[i][j];
    return r;
}

DMat mat_scaled(const DMat& a, const Gauss& c)
{
    DMat r = a;
    for (auto& row : r)
        for (auto& v : row) v *= c;
    return r;
}

DMat mat_transpose(const DMat& a)
{
    if (a.empty()) return a;
    DMat r(a[0].size(), DVec(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) r[j][i] = a[i][j];
    return r;
}

DMat identity(std::size_t n)
{
    DMat r(n, DVec(n));
    for (std::size_t i = 0; i < n; ++i) r[i][i] = Gauss(1);
    return r;
}

DMat mat_inverse(const DMat& a)
{
    std::size_t n = a.size();
    DMat aug(n, DVec(2 * n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug[i][j] = a[i][j];
        aug[i][n + i] = Gauss(1);
    }
    auto piv = rref(aug);
    if (piv.size() < n || piv[n - 1] != n - 1) throw std::domain_error("matrix is singular");
    DMat r(n, DVec(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) r[i][j] = aug[i][n + j];
    return r;
}

DMat block(const DMat& a, const DMat& b, const DMat& c, const DMat& d)
{
    std::size_t n = a.size();
    DMat r(2 * n, DVec(2 * n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            r[i][j] = a[i][j];
            r[i][n + j] = b[i][j];
            r[n + i][j] = c[i][j];
            r[n + i][n + j] = d[i][j];
        }
    return r;
}

bool mat_equal(const DMat& a, const DMat& b) { return a == b; }

namespace {

DMat zeros(std::size_t n) { return DMat(n, DVec(n)); }

Gauss det(DMat a)
{
    std::size_t n = a.size();
    Gauss d(1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c].is_zero()) ++p;
        if (p == n) return Gauss();
        if (p != c) {
            std::swap(a[p], a[c]);
            d = -d;
        }
        d *= a[c][c];
        Gauss inv = Gauss(1) / a[c][c];
        for (std::size_t i = c + 1; i < n; ++i) {
            if (a[i][c].is_zero()) continue;
            Gauss f = a[i][c] * inv;
            for (std::size_t k = c; k < n; ++k) a[i][k] -= f * a[c][k];
        }
    }
    return d;
}

DMat pairing_matrix(std::size_t m)
{
    DMat h = mat_scaled(identity(m), Gauss::frac(1, 2));
    return block(zeros(m), h, h, zeros(m));
}

} // namespace

GCS bihermitian_to_gcs(const Bihermitian& d)
{
    DMat wp = d.omega(true), wm = d.omega(false);
    DMat wpi = mat_inverse(wp), wmi = mat_inverse(wm);
    DMat jpt = mat_transpose(d.Jp), jmt = mat_transpose(d.Jm);
    const Gauss h = Gauss::frac(1, 2);
    GCS s;
    s.J1 = mat_scaled(block(mat_add(d.Jp, d.Jm), mat_scaled(mat_add(wpi, wmi, Gauss(-1)), Gauss(-1)),
                            mat_add(wp, wm, Gauss(-1)), mat_scaled(mat_add(jpt, jmt), Gauss(-1))),
                      h);
    s.J2 = mat_scaled(block(mat_add(d.Jp, d.Jm, Gauss(-1)), mat_scaled(mat_add(wpi, wmi), Gauss(-1)),
                            mat_add(wp, wm), mat_scaled(mat_add(jpt, jmt, Gauss(-1)), Gauss(-1))),
                      h);
    s.G = mat_scaled(mat_mul(s.J1, s.J2), Gauss(-1));
    return s;
}

bool BihermitianCheck::ok() const
{
    return almost_complex && hermitian && gcs_square && gcs_commute && gcs_orthogonal && metric_positive &&
           metric_form;
}

BihermitianCheck check_bihermitian(const Bihermitian& d, const GCS& s)
{
    BihermitianCheck c;
    std::size_t m = d.g.size();
    DMat minus1 = mat_scaled(identity(m), Gauss(-1)), minus2 = mat_scaled(identity(2 * m), Gauss(-1));
    for (const DMat* J : {&d.Jp, &d.Jm}) {
        if (mat_mul(*J, *J) != minus1) c.almost_complex = false;
        if (mat_mul(mat_transpose(*J), mat_mul(d.g, *J)) != d.g) c.hermitian = false;
    }
    c.gcs_square = mat_mul(s.J1, s.J1) == minus2 && mat_mul(s.J2, s.J2) == minus2;
    c.gcs_commute = mat_mul(s.J1, s.J2) == mat_mul(s.J2, s.J1);
    DMat P = pairing_matrix(m);
    c.gcs_orthogonal = mat_mul(mat_transpose(s.J1), mat_mul(P, s.J1)) == P &&
                       mat_mul(mat_transpose(s.J2), mat_mul(P, s.J2)) == P;
    DMat PG = mat_mul(P, s.G);
    c.metric_positive = PG == mat_transpose(PG);
    for (auto& row : PG)
        for (auto& v : row)
            if (!v.is_real()) c.metric_positive = false;
    for (std::size_t k = 1; k <= 2 * m && c.metric_positive; ++k) {
        DMat minor(k, DVec(k));
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) minor[i][j] = PG[i][j];
        Gauss dt = det(minor);
        if (!dt.is_real() || sgn(dt.re) <= 0) c.metric_positive = false;
    }
    c.metric_form = s.G == block(zeros(m), mat_inverse(d.g), d.g, zeros(m));
    return c;
}

GCS kahler_gcs(const DMat& g, const DMat& J)
{
    std::size_t m = g.size();
    DMat w = mat_mul(g, J);
    GCS s;
    s.J1 = block(mat_scaled(J, Gauss(-1)), zeros(m), zeros(m), mat_transpose(J));
    s.J2 = block(zeros(m), mat_inverse(w), mat_scaled(w, Gauss(-1)), zeros(m));
    s.G = mat_scaled(mat_mul(s.J1, s.J2), Gauss(-1));
    return s;
}

std::pair<DMat, DMat> poisson_tensors(const Bihermitian& d)
{
    DMat wpi = mat_inverse(d.omega(true)), wmi = mat_inverse(d.omega(false));
    DMat mwp = mat_scaled(wpi, Gauss(-1));
    return {mat_add(mwp, wmi), mat_add(mwp, wmi, Gauss(-1))};
}

Bihermitian flat_kahler(int n, const Gauss& scale)
{
    std::size_t m = 2 * std::size_t(n);
    DMat J = zeros(m);
    for (std::size_t a = 0; a < std::size_t(n); ++a) {
        J[2 * a + 1][2 * a] = Gauss(1);
        J[2 * a][2 * a + 1] = Gauss(-1);
    }
    return {mat_scaled(identity(m), scale), J, J};
}

// ---------------------------------------------------------------- frames

namespace {

ESection constant_section(const DVec& X, const DVec& xi)
{
    int m = int(X.size());
    ESection s = ESection::zero(m);
    for (int i = 0; i < m; ++i) {
        s.X[i] = Poly::constant(m, X[i]);
        s.xi[i] = Poly::constant(m, xi[i]);
    }
    return s;
}

bool constant(const ESection& s)
{
    for (auto& p : s.X)
        if (!p.is_const()) return false;
    for (auto& p : s.xi)
        if (!p.is_const()) return false;
    return true;
}

DVec as_vector(const ESection& s)
{
    DVec v;
    for (auto& p : s.X) v.push_back(p.const_value());
    for (auto& p : s.xi) v.push_back(p.const_value());
    return v;
}

DVec mat_vec(const DMat& a, const DVec& x)
{
    DVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j)
            if (!a[i][j].is_zero() && !x[j].is_zero()) r[i] += a[i][j] * x[j];
    return r;
}

Gauss cpair(const ESection& a, const ESection& b) { return pairing(a, b).const_value(); }

// +i eigenvectors of J normalized so that the first nonzero entry is 1/2
std::vector<DVec> holomorphic_vectors(const DMat& J)
{
    std::size_t m = J.size();
    DMat A = mat_add(J, identity(m), -Gauss::I());
    auto ns = nullspace(A, m);
    for (auto& v : ns) {
        std::size_t k = 0;
        while (v[k].is_zero()) ++k;
        Gauss s = Gauss::frac(1, 2) / v[k];
        for (auto& x : v) x *= s;
    }
    return ns;
}

void sector(const Bihermitian& d, bool plus, std::vector<ESection>& low, std::vector<ESection>& up)
{
    auto vs = holomorphic_vectors(plus ? d.Jp : d.Jm);
    Gauss sg = plus ? Gauss(1) : Gauss(-1);
    for (auto& v : vs) low.push_back(constant_section(v, mat_vec(mat_scaled(d.g, sg), v)));
    std::size_t n = low.size();
    DMat M(n, DVec(n));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) M[a][b] = cpair(low[a], low[b].conj());
    DMat Mi = mat_inverse(M);
    int m = d.dim();
    for (std::size_t b = 0; b < n; ++b) {
        ESection e = ESection::zero(m);
        for (std::size_t c = 0; c < n; ++c) e += low[c].conj().scaled(Mi[c][b]);
        up.push_back(e);
    }
}

} // namespace

Frames frames(const Bihermitian& d)
{
    Frames f;
    sector(d, true, f.ep, f.epd);
    sector(d, false, f.em, f.emd);
    return f;
}

bool FrameCheck::ok() const { return duality && isotropic && orthogonal && conjugation && involutive && eigen; }

FrameCheck check_frames(const Bihermitian& d, const Frames& f, const Form& H)
{
    FrameCheck c;
    int n = f.n();
    auto delta = [](int a, int b) { return a == b ? Gauss(1) : Gauss(); };
    auto zero_all = [&](const std::vector<ESection>& A, const std::vector<ESection>& B) {
        for (auto& a : A)
            for (auto& b : B)
                if (!pairing(a, b).is_zero()) return false;
        return true;
    };
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (pairing(f.ep[a], f.epd[b]) != Poly::constant(d.dim(), delta(a, b)) && !(a != b && pairing(f.ep[a], f.epd[b]).is_zero()))
                c.duality = false;
            if (pairing(f.em[a], f.emd[b]) != Poly::constant(d.dim(), delta(a, b)) && !(a != b && pairing(f.em[a], f.emd[b]).is_zero()))
                c.duality = false;
        }
    c.isotropic = zero_all(f.ep, f.ep) && zero_all(f.epd, f.epd) && zero_all(f.em, f.em) && zero_all(f.emd, f.emd);
    c.orthogonal = zero_all(f.ep, f.em) && zero_all(f.ep, f.emd) && zero_all(f.epd, f.em) && zero_all(f.epd, f.emd);

    // conj(e_α^±) = ±g(v̄_α, v_β) e^β_±
    auto conj_check = [&](const std::vector<ESection>& low, const std::vector<ESection>& up, bool plus) {
        for (int a = 0; a < n; ++a) {
            ESection rhs = ESection::zero(d.dim());
            for (int b = 0; b < n; ++b) {
                DVec va = as_vector(low[a].conj()), vb = as_vector(low[b]);
                Gauss gab;
                for (int i = 0; i < d.dim(); ++i)
                    for (int j = 0; j < d.dim(); ++j) gab += va[i] * d.g[i][j] * vb[j];
                rhs += up[b].scaled(plus ? gab : -gab);
            }
            if (!(low[a].conj() - rhs).is_zero()) return false;
        }
        return true;
    };
    bool consts = true;
    for (auto* v : {&f.ep, &f.epd, &f.em, &f.emd})
        for (auto& s : *v) consts = consts && constant(s);
    c.conjugation = consts && conj_check(f.ep, f.epd, true) && conj_check(f.em, f.emd, false);

    auto same_zero = [&](const std::vector<ESection>& A) {
        for (auto& a : A)
            for (auto& b : A)
                if (!dorfman(a, b, H).is_zero()) return false;
        return true;
    };
    auto closed = [&](const std::vector<ESection>& L) {
        for (auto& a : L)
            for (auto& b : L) {
                ESection br = dorfman(a, b, H);
                for (auto& e : L)
                    if (!pairing(br, e).is_zero()) return false;
            }
        return true;
    };
    std::vector<ESection> L1 = f.ep, L2 = f.ep;
    L1.insert(L1.end(), f.em.begin(), f.em.end());
    L2.insert(L2.end(), f.emd.begin(), f.emd.end());
    c.involutive = same_zero(f.ep) && same_zero(f.em) && same_zero(f.epd) && same_zero(f.emd) && closed(L1) &&
                   closed(L2);

    if (!consts) {
        c.eigen = false;
        return c;
    }
    GCS s = bihermitian_to_gcs(d);
    auto eig = [&](const DMat& J, const std::vector<ESection>& L) {
        for (auto& e : L) {
            DVec v = as_vector(e), w = mat_vec(J, v);
            for (std::size_t i = 0; i < v.size(); ++i)
                if (w[i] != Gauss::I() * v[i]) return false;
        }
        return true;
    };
    c.eigen = eig(s.J1, L1) && eig(s.J2, L2);
    return c;
}

bool StructureFunctions::all_zero() const
{
    for (auto* t : {&c_lower_p, &c_lower_m, &c_upper_p, &c_upper_m, &d_lower, &e_lower, &d_upper, &e_upper})
        for (auto& a : *t)
            for (auto& b : a)
                for (auto& p : b)
                    if (!p.is_zero()) return false;
    return true;
}

StructureFunctions structure_functions(const Frames& f, const Form& H)
{
    int n = f.n();
    using T3 = std::vector<std::vector<std::vector<Poly>>>;
    auto table = [&](const std::vector<ESection>& A, const std::vector<ESection>& B, const std::vector<ESection>& C) {
        T3 t(n, std::vector<std::vector<Poly>>(n, std::vector<Poly>(n)));
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                ESection br = dorfman(A[a], B[b], H);
                for (int g = 0; g < n; ++g) t[a][b][g] = pairing(br, C[g]);
            }
        return t;
    };
    StructureFunctions s;
    s.c_lower_p = table(f.ep, f.ep, f.epd);
    s.c_lower_m = table(f.em, f.em, f.emd);
    s.c_upper_p = table(f.epd, f.epd, f.ep);
    s.c_upper_m = table(f.emd, f.emd, f.em);
    s.d_lower = table(f.ep, f.em, f.epd);
    s.e_lower = table(f.ep, f.em, f.emd);
    s.d_upper = table(f.epd, f.emd, f.ep);
    s.e_upper = table(f.epd, f.emd, f.em);
    return s;
}

// ---------------------------------------------------------------- divergence, modular class

std::vector<Poly> divergence(const std::vector<std::vector<Poly>>& P, const LogDensity& mu)
{
    // div P · μ = d(P·μ) with (X∧Y)·μ = ι_Y ι_X μ
    std::size_t m = P.size();
    std::vector<Poly> r(m, Poly(int(m)));
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = 0; i < m; ++i) {
            r[j] += P[j][i].d(int(i));
            if (!mu.logd.is_zero()) r[j] += mu.logd.d(int(i)) * P[j][i];
        }
    return r;
}

Poly divergence_of_section(const ESection& e, const LogDensity& mu)
{
    // −Lie_X μ / μ = −(∂_i X^i + X(log μ̃))
    Poly r(e.dim());
    for (int i = 0; i < e.dim(); ++i) r += e.X[i].d(i);
    if (!mu.logd.is_zero()) r += apply_vector(e.X, mu.logd);
    return -r;
}

std::vector<Poly> modular_representative(const std::vector<ESection>& L, const std::vector<ESection>& duals,
                                         const Form& H, const LogDensity& mu, const Poly& kappa)
{
    std::vector<Poly> th;
    for (std::size_t i = 0; i < L.size(); ++i) {
        Poly t(L[i].dim());
        for (std::size_t j = 0; j < L.size(); ++j) t += pairing(dorfman(L[i], L[j], H), duals[j]);
        t -= divergence_of_section(L[i], mu);
        if (!kappa.is_zero()) t -= apply_vector(L[i].X, kappa);
        th.push_back(t);
    }
    return th;
}

namespace {

// solve Σ a_i w_i = rhs with constant forms w_i and polynomial rhs
std::vector<Poly> solve_forms(const std::vector<Form>& w, const Form& rhs, int m, const char* what)
{
    std::set<std::uint32_t> masks;
    for (auto& f : w)
        for (auto& [k, p] : f.terms()) {
            if (!p.is_const()) throw std::invalid_argument(std::string(what) + ": frames must be constant");
            masks.insert(k);
        }
    std::set<Poly::Exp> exps;
    for (auto& [k, p] : rhs.terms()) {
        masks.insert(k);
        for (auto& [e, c] : p.terms()) exps.insert(e);
    }
    std::vector<std::uint32_t> mk(masks.begin(), masks.end());
    std::vector<Poly> a(w.size(), Poly(m));
    for (auto& e : exps) {
        DMat A(mk.size(), DVec(w.size() + 1));
        for (std::size_t r = 0; r < mk.size(); ++r) {
            for (std::size_t i = 0; i < w.size(); ++i) A[r][i] = w[i].at(mk[r]).const_value();
            Poly pr = rhs.at(mk[r]);
            auto it = pr.terms().find(e);
            if (it != pr.terms().end()) A[r][w.size()] = it->second;
        }
        auto piv = rref(A);
        if (!piv.empty() && piv.back() == w.size())
            throw std::domain_error(std::string(what) + ": right-hand side is not in the span");
        for (std::size_t r = 0; r < piv.size(); ++r) {
            Poly::Exp ee = e;
            Poly t(m);
            t.add_term(ee, A[r][w.size()]);
            a[piv[r]] += t;
        }
    }
    return a;
}

} // namespace

std::vector<Poly> chi_section(const std::vector<ESection>& L, const std::vector<ESection>& duals, const ExpSpinor& rho)
{
    int m = rho.rho0.dim();
    std::vector<Form> w;
    for (auto& u : duals) w.push_back(clifford(u, rho.rho0));
    // e^{-h} d(e^h ρ₀) = dh ∧ ρ₀
    Form rhs = Form::one_form(D_of(rho.h).xi).wedge(rho.rho0);
    auto a = solve_forms(w, rhs, m, "chi_section");
    std::vector<Poly> chi;
    for (std::size_t i = 0; i < L.size(); ++i) chi.push_back(a[i] * Gauss(2));
    return chi;
}

SpinorVolume spinor_volume(const std::vector<ESection>& L, const std::vector<ESection>& duals, const ExpSpinor& rho)
{
    (void)L;
    Form z = rho.rho0;
    for (auto it = duals.rbegin(); it != duals.rend(); ++it) z = clifford(*it, z);
    Form target = rho.rho0.conj();
    auto c = solve_forms({z}, target, rho.rho0.dim(), "spinor_volume");
    if (!c[0].is_const() || c[0].is_zero()) throw std::domain_error("spinor_volume: conj(rho) not in det(L*)·rho");
    SpinorVolume v;
    v.kappa = rho.h.conj() - rho.h;
    v.mu.logd = rho.h + rho.h.conj();
    v.mu_const = mukai(rho.rho0, rho.rho0.conj()).const_value();
    if (v.mu_const.is_zero()) throw std::domain_error("spinor_volume: vanishing Mukai norm");
    return v;
}

std::vector<Poly> Dilaton::d() const
{
    std::vector<Poly> r;
    for (int i = 0; i < poly.dim(); ++i) r.push_back(poly.d(i));
    return r;
}

Dilaton dilaton(const ExpSpinor& rho, const DMat& g)
{
    Dilaton D;
    D.mukai_const = mukai(rho.rho0, rho.rho0.conj()).const_value();
    if (D.mukai_const.is_zero()) throw std::domain_error("dilaton: vanishing Mukai norm");
    D.det_g = det(g);
    D.poly = (rho.h + rho.h.conj()) * Gauss::frac(-1, 2);
    return D;
}

std::vector<Poly> v_form(const Bihermitian& d, const Form& H, bool plus)
{
    int m = d.dim();
    const DMat& J = plus ? d.Jp : d.Jm;
    DMat gi = mat_inverse(d.g);
    auto comp = [&](int k, int j, int l) {
        if (k == j || j == l || k == l) return Poly(m);
        int idx[3] = {k, j, l};
        int sign = 1;
        for (int a = 0; a < 3; ++a)
            for (int b = a + 1; b < 3; ++b)
                if (idx[a] > idx[b]) sign = -sign;
        Poly p = H.at((1u << k) | (1u << j) | (1u << l));
        return sign < 0 ? -p : p;
    };
    std::vector<Poly> v(m, Poly(m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            if (J[j][i].is_zero()) continue;
            for (int k = 0; k < m; ++k)
                for (int l = 0; l < m; ++l) {
                    if (J[k][l].is_zero()) continue;
                    for (int mm = 0; mm < m; ++mm) {
                        if (gi[mm][l].is_zero()) continue;
                        v[i] += comp(k, j, mm) * (J[j][i] * J[k][l] * gi[mm][l]);
                    }
                }
            }
    for (auto& p : v) p *= plus ? Gauss::frac(1, 2) : Gauss::frac(-1, 2);
    return v;
}

namespace {

std::vector<ESection> eigen_sections(const DMat& J)
{
    std::size_t n = J.size();
    DMat A = mat_add(J, identity(n), -Gauss::I());
    std::vector<ESection> out;
    for (auto& v : nullspace(A, n)) {
        DVec X(v.begin(), v.begin() + long(n / 2)), xi(v.begin() + long(n / 2), v.end());
        out.push_back(constant_section(X, xi));
    }
    return out;
}

bool annihilates(const std::vector<ESection>& L, const Form& rho)
{
    for (auto& e : L)
        if (!clifford(e, rho).is_zero()) return false;
    return true;
}

} // namespace

MukaiSign mukai_sign_check(int n)
{
    Bihermitian d = flat_kahler(n, Gauss(1));
    int m = d.dim();
    GCS s = kahler_gcs(d.g, d.Jp);
    DMat w = d.omega(true);
    Form om(m);
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (!w[i][j].is_zero()) om += Form::basis(m, (1u << i) | (1u << j), Poly::constant(m, w[i][j]));
    auto L1 = eigen_sections(s.J1), L2 = eigen_sections(s.J2);
    Form rho2;
    bool found2 = false;
    for (Gauss sg : {Gauss::I(), -Gauss::I()}) {
        Form r = exp_nilpotent(om * sg);
        if (annihilates(L2, r)) {
            rho2 = r;
            found2 = true;
        }
    }
    Form Om = Form::function(Poly::constant(m, Gauss(1)));
    for (int a = 0; a < n; ++a) {
        std::vector<Poly> dz(m, Poly(m));
        dz[2 * a] = Poly::constant(m, Gauss(1));
        dz[2 * a + 1] = Poly::constant(m, Gauss::I());
        Om = Om.wedge(Form::one_form(dz));
    }
    Form rho1;
    bool found1 = false;
    for (const Form& r : {Om, Om.conj()})
        if (annihilates(L1, r)) {
            rho1 = r;
            found1 = true;
        }
    if (!found1 || !found2) throw std::logic_error("mukai_sign_check: pure spinor not found");
    MukaiSign ms;
    ms.c = mukai(rho2, rho2.conj()).const_value() / mukai(rho1, rho1.conj()).const_value();
    ms.expected = (m * (m - 1) / 2) % 2 ? Gauss(-1) : Gauss(1);
    return ms;
}

// ---------------------------------------------------------------- algebroid complex

std::size_t AlgebroidCohomology::total() const
{
    std::size_t t = 0;
    for (auto& r : rows) t += r.h;
    return t;
}

std::size_t AlgebroidCohomology::at(int k, int l) const
{
    for (auto& r : rows)
        if (r.k == k && r.l == l) return r.h;
    return 0;
}

namespace {

using Cochain = std::map<std::pair<std::uint32_t, std::uint32_t>, Poly>; // (L* mask, W mask) -> coefficient

void cadd(Cochain& c, std::uint32_t I, std::uint32_t K, const Poly& p)
{
    if (p.is_zero()) return;
    auto key = std::make_pair(I, K);
    auto it = c.find(key);
    if (it == c.end()) {
        c.emplace(key, p);
        return;
    }
    it->second += p;
    if (it->second.is_zero()) c.erase(it);
}

struct AlgebroidData {
    std::vector<ESection> L, W;
    std::vector<std::vector<std::vector<Poly>>> c;    // c[i][j][k] = <[e_i,e_j], e^k>
    std::vector<std::vector<std::vector<Poly>>> conn; // conn[i][b][c]: ∇_{e_i} w_b = Σ conn w_c
    int m = 0;

    Cochain d(const Cochain& x) const
    {
        Cochain r;
        std::size_t nl = L.size(), nw = W.size();
        for (auto& [key, f] : x) {
            auto [I, K] = key;
            for (std::size_t i = 0; i < nl; ++i) {
                if (I >> i & 1u) continue;
                Poly sg = Poly::constant(m, below(I, int(i)) % 2 ? Gauss(-1) : Gauss(1));
                std::uint32_t J = I | (1u << i);
                cadd(r, J, K, apply_vector(L[i].X, f) * sg);
                for (std::size_t b = 0; b < nw; ++b) {
                    if (!(K >> b & 1u)) continue;
                    std::uint32_t Kb = K & ~(1u << b);
                    int sb = below(K, int(b));
                    for (std::size_t cc = 0; cc < nw; ++cc) {
                        if (conn[i][b][cc].is_zero() || (Kb >> cc & 1u)) continue;
                        int s = sb + below(Kb, int(cc));
                        cadd(r, J, Kb | (1u << cc), f * conn[i][b][cc] * sg * (s % 2 ? Gauss(-1) : Gauss(1)));
                    }
                }
            }
            // f dθ^I with dθ^k = −½ Σ c_{ij}^k θ^i θ^j
            int pos = 0;
            for (std::size_t k = 0; k < nl; ++k) {
                if (!(I >> k & 1u)) continue;
                std::uint32_t rest = I & ~(1u << k);
                for (std::size_t i = 0; i < nl; ++i)
                    for (std::size_t j = 0; j < nl; ++j) {
                        if (i == j || c[i][j][k].is_zero()) continue;
                        std::uint32_t ij = (1u << i) | (1u << j);
                        if (rest & ij) continue;
                        // d(θ^low θ^k θ^high) ∋ (−1)^{|low|} θ^low dθ^k θ^high
                        std::uint32_t lowmask = rest & ((1u << k) - 1u), highmask = rest & ~((1u << k) - 1u);
                        int sign = (i > j ? -1 : 1) * (pos % 2 ? -1 : 1) * wedge_sign(lowmask, ij) *
                                   wedge_sign(lowmask | ij, highmask);
                        cadd(r, rest | ij, K, f * c[i][j][k] * Gauss::frac(-sign, 2));
                    }
                ++pos;
            }
        }
        return r;
    }
};

} // namespace

AlgebroidCohomology algebroid_cohomology(const std::vector<ESection>& L, const std::vector<ESection>& duals,
                                         const std::vector<ESection>& W, const std::vector<ESection>& W_duals,
                                         const Form& H, int D, int Dbar)
{
    if (L.empty()) throw std::invalid_argument("algebroid_cohomology: empty frame");
    AlgebroidData A;
    A.L = L;
    A.W = W;
    A.m = L[0].dim();
    if (A.m % 2) throw std::invalid_argument("algebroid_cohomology: odd real dimension");
    int n = A.m / 2;
    std::size_t nl = L.size(), nw = W.size();
    A.c.assign(nl, std::vector<std::vector<Poly>>(nl, std::vector<Poly>(nl, Poly(A.m))));
    for (std::size_t i = 0; i < nl; ++i)
        for (std::size_t j = 0; j < nl; ++j) {
            ESection br = dorfman(L[i], L[j], H);
            for (std::size_t k = 0; k < nl; ++k) A.c[i][j][k] = pairing(br, duals[k]);
        }
    A.conn.assign(nl, std::vector<std::vector<Poly>>(nw, std::vector<Poly>(nw, Poly(A.m))));
    for (std::size_t i = 0; i < nl; ++i)
        for (std::size_t b = 0; b < nw; ++b) {
            ESection br = dorfman(L[i], W[b], H);
            for (std::size_t c = 0; c < nw; ++c) A.conn[i][b][c] = pairing(br, W_duals[c]);
        }

    // monomials z^a zbar^b with |a| <= D, |b| <= Dbar
    std::vector<std::pair<int, Poly>> zmon, zbmon; // (degree, poly)
    std::function<void(int, int, int, Poly, bool, std::vector<std::pair<int, Poly>>&, int)> gen =
        [&](int a, int left, int deg, Poly cur, bool bar, std::vector<std::pair<int, Poly>>& out, int maxd) {
            if (a == n) {
                out.push_back({deg, cur});
                return;
            }
            Poly v = bar ? Poly::zbar(A.m, a) : Poly::z(A.m, a);
            Poly p = cur;
            for (int k = 0; k <= left; ++k) {
                gen(a + 1, left - k, deg + k, p, bar, out, maxd);
                p = p * v;
            }
        };
    gen(0, D, 0, Poly::constant(A.m, Gauss(1)), false, zmon, D);
    gen(0, Dbar, 0, Poly::constant(A.m, Gauss(1)), true, zbmon, Dbar);

    std::map<std::pair<int, int>, std::vector<Cochain>> cells;
    for (std::uint32_t I = 0; I < (1u << nl); ++I)
        for (std::uint32_t K = 0; K < (1u << nw); ++K) {
            int k = popc(I), l = popc(K);
            for (auto& [da, pa] : zmon) {
                if (da + k + l > D) continue;
                for (auto& [db, pb] : zbmon) {
                    Cochain c;
                    cadd(c, I, K, pa * pb);
                    cells[{k, l}].push_back(c);
                }
            }
        }

    auto rank_of = [&](const std::vector<Cochain>& vs) {
        std::map<std::tuple<std::uint32_t, std::uint32_t, Poly::Exp>, std::size_t> col;
        for (auto& v : vs)
            for (auto& [key, p] : v)
                for (auto& [e, c] : p.terms()) col.emplace(std::make_tuple(key.first, key.second, e), 0);
        std::size_t k = 0;
        for (auto& [key, i] : col) i = k++;
        DMat M;
        for (auto& v : vs) {
            DVec row(k);
            for (auto& [key, p] : v)
                for (auto& [e, c] : p.terms()) row[col[std::make_tuple(key.first, key.second, e)]] = c;
            M.push_back(std::move(row));
        }
        return rank(std::move(M));
    };

    AlgebroidCohomology out;
    std::map<std::pair<int, int>, std::size_t> rout;
    for (auto& [key, vs] : cells) {
        std::vector<Cochain> imgs;
        for (auto& v : vs) {
            Cochain dv = A.d(v);
            if (!A.d(dv).empty()) out.square_zero = false;
            imgs.push_back(std::move(dv));
        }
        rout[key] = rank_of(imgs);
        auto nx = cells.find({key.first + 1, key.second});
        std::vector<Cochain> target = nx == cells.end() ? std::vector<Cochain>{} : nx->second;
        std::size_t base = rank_of(target);
        target.insert(target.end(), imgs.begin(), imgs.end());
        if (rank_of(target) != base) out.closed = false;
    }
    for (auto& [key, vs] : cells) {
        AlgebroidRow r;
        r.k = key.first;
        r.l = key.second;
        r.dim = vs.size();
        r.rank_out = rout[key];
        auto pv = rout.find({key.first - 1, key.second});
        r.rank_in = pv == rout.end() ? 0 : pv->second;
        r.h = r.dim - r.rank_out - r.rank_in;
        out.rows.push_back(r);
    }
    return out;
}

// ---------------------------------------------------------------- trace identities

namespace {

struct RelationPack {
    std::vector<std::string> funcs = {"logsqrtg", "psi1", "psi2", "phibar-", "phibar+", "phi+", "phi-", "Phi"};
    std::vector<std::string> ders = {"d+", "d-", "dbar+", "dbar-"};

    CoeffExpr f(const std::string& s) const { return CoeffExpr::sym(s); }
    std::string dname(const std::string& D, const std::string& fn) const { return D + "(" + fn + ")"; }
    CoeffExpr apply(const std::string& D, const CoeffExpr& e) const
    {
        return e.derive([&](SymId s) { return CoeffExpr::sym(dname(D, symbols::name(s))); });
    }

    std::vector<CoeffExpr> relations() const
    {
        const Gauss I = Gauss::I();
        std::vector<CoeffExpr> fun = {
            f("logsqrtg") - f("phi+") - f("phibar+") - f("Phi") * Gauss(4),
            f("logsqrtg") - f("phi-") - f("phibar-") - f("Phi") * Gauss(4),
            f("psi1") - (f("phi-") - f("phibar+")) * I,
            f("psi2") - (f("phi+") - f("phi-")) * I,
        };
        std::vector<CoeffExpr> out;
        for (auto& D : ders)
            for (auto& r : fun) out.push_back(apply(D, r));
        // φ± holomorphic for J±: killed by the antiholomorphic anchors, conjugates by the holomorphic ones
        out.push_back(CoeffExpr::sym(dname("d+", "phibar+")));
        out.push_back(CoeffExpr::sym(dname("dbar+", "phi+")));
        out.push_back(CoeffExpr::sym(dname("d-", "phibar-")));
        out.push_back(CoeffExpr::sym(dname("dbar-", "phi-")));
        return out;
    }

    CoeffExpr reduce(const CoeffExpr& e) const
    {
        std::vector<SymId> cols;
        for (auto& D : ders)
            for (auto& fn : funcs) cols.push_back(symbols::intern(dname(D, fn)));
        std::map<SymId, std::size_t> idx;
        for (std::size_t i = 0; i < cols.size(); ++i) idx[cols[i]] = i;
        auto vec = [&](const CoeffExpr& x) {
            DVec v(cols.size());
            for (auto& [m, c] : x.terms()) {
                if (m.size() != 1 || m[0].second != 1 || !idx.count(m[0].first))
                    throw std::logic_error("trace identity: non-linear term " + x.str());
                v[idx[m[0].first]] = c;
            }
            return v;
        };
        DMat R;
        for (auto& r : relations()) R.push_back(vec(r));
        auto piv = rref(R);
        DVec v = vec(e);
        for (std::size_t r = 0; r < piv.size(); ++r) {
            Gauss c = v[piv[r]];
            if (c.is_zero()) continue;
            for (std::size_t k = 0; k < v.size(); ++k) v[k] -= c * R[r][k];
        }
        CoeffExpr out;
        for (std::size_t k = 0; k < v.size(); ++k)
            if (!v[k].is_zero()) out += CoeffExpr::sym(cols[k]) * v[k];
        return out;
    }
};

} // namespace

std::vector<TraceResidual> trace_identities()
{
    RelationPack P;
    const Gauss I = Gauss::I();
    auto f = [&](const char* s) { return P.f(s); };
    CoeffExpr L = f("logsqrtg"), Phi = f("Phi"), psi1 = f("psi1"), psi2 = f("psi2");
    CoeffExpr logmu = L - Phi * Gauss(2); // μ = e^{−2Φ} vol_g

    // traces in coordinate frames (c^± = 0)
    CoeffExpr e_tr = P.apply("d+", f("phi-") + Phi * Gauss(2));          // e_{αβ}^β
    CoeffExpr d_tr = -P.apply("d-", f("phi+") + Phi * Gauss(2));         // d_{βα}^β
    CoeffExpr eu_tr = -P.apply("dbar+", f("phi-") + Phi * Gauss(2));     // e^{αβ}_β
    CoeffExpr du_tr = P.apply("dbar-", f("phi+") + Phi * Gauss(2));      // d^{βα}_β

    std::vector<std::pair<std::string, CoeffExpr>> raw;
    // θ(e) = c + trace − div_μ e + π(e)(−log√det g + iψ); −div_μ e = π(e) log μ̃ for these frames
    raw.push_back({"theta_1(e_a^+)", e_tr + P.apply("d+", logmu) + P.apply("d+", -L + psi1 * I)});
    raw.push_back({"theta_2(e_a^+)", -e_tr + P.apply("d+", logmu) + P.apply("d+", psi2 * I)});
    // for e_a^−: <[e_a^-, e_b^+], e^b_+> = −d_{ba}^b
    raw.push_back({"theta_1(e_a^-)", -d_tr + P.apply("d-", logmu) + P.apply("d-", -L + psi1 * I)});
    raw.push_back({"difference 2e_{ab}^b + d+(i psi1 - i psi2 - log sqrt g)",
                   e_tr * Gauss(2) + P.apply("d+", psi1 * I - psi2 * I - L)});
    raw.push_back({"dual difference dbar+(i psi1 - i psi2 - log sqrt g) - 2e^{ab}_b",
                   P.apply("dbar+", psi1 * I - psi2 * I - L) - eu_tr * Gauss(2)});
    raw.push_back({"dual minus dbar-(log sqrt g - i psi1 - i psi2) - 2d^{ba}_b",
                   P.apply("dbar-", L - psi1 * I - psi2 * I) - du_tr * Gauss(2)});
    std::vector<TraceResidual> out;
    for (auto& [n, e] : raw) out.push_back({n, P.reduce(e)});
    return out;
}

// ---------------------------------------------------------------- patch files

namespace {

std::vector<std::string> words(const std::string& s)
{
    std::istringstream in(s);
    std::vector<std::string> w;
    for (std::string t; in >> t;) w.push_back(t);
    return w;
}

std::string strip(const std::string& s)
{
    auto h = s.find('#');
    std::string t = h == std::string::npos ? s : s.substr(0, h);
    auto b = t.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = t.find_last_not_of(" \t\r");
    return t.substr(b, e - b + 1);
}

} // namespace

Patch parse_patch(const std::string& text)
{
    Patch P;
    std::istringstream in(text);
    std::string line;
    int ln = 0;
    auto fail = [&](const std::string& m) {
        throw std::runtime_error("patch line " + std::to_string(ln) + ": " + m);
    };
    bool has_jm = false;
    std::vector<std::string> lines;
    for (std::string l; std::getline(in, l);) lines.push_back(l);
    for (std::size_t li = 0; li < lines.size(); ++li) {
        ln = int(li) + 1;
        std::string s = strip(lines[li]);
        if (s.empty()) continue;
        auto w = words(s);
        if (w[0] == "coords") {
            P.coords.assign(w.begin() + 1, w.end());
            P.dim = int(P.coords.size());
            if (P.dim == 0 || P.dim > 16) fail("coords: 1 to 16 names expected");
            P.H = Form(P.dim);
        } else if (w[0] == "matrix") {
            if (P.dim == 0) fail("coords must come first");
            if (w.size() != 2) fail("matrix NAME expected");
            DMat M;
            for (++li; li < lines.size(); ++li) {
                ln = int(li) + 1;
                std::string r = strip(lines[li]);
                if (r.empty()) continue;
                if (r == "end") break;
                DVec row;
                for (auto& t : words(r)) {
                    Poly p = parse_poly(t, {});
                    if (!p.is_const()) fail("matrix entries must be constants");
                    row.push_back(p.const_value());
                }
                if (int(row.size()) != P.dim) fail("matrix row needs " + std::to_string(P.dim) + " entries");
                M.push_back(row);
            }
            if (int(M.size()) != P.dim) fail("matrix needs " + std::to_string(P.dim) + " rows");
            if (w[1] == "g") {
                P.data.g = M;
                P.has_metric = true;
            } else if (w[1] == "Jplus") P.data.Jp = M;
            else if (w[1] == "Jminus") {
                P.data.Jm = M;
                has_jm = true;
            } else fail("unknown matrix '" + w[1] + "' (g, Jplus, Jminus)");
        } else if (w[0] == "form") {
            if (P.dim == 0) fail("coords must come first");
            if (w.size() != 2) fail("form NAME expected");
            Form F(P.dim);
            for (++li; li < lines.size(); ++li) {
                ln = int(li) + 1;
                std::string r = strip(lines[li]);
                if (r.empty()) continue;
                if (r == "end") break;
                auto colon = r.find(':');
                if (colon == std::string::npos) fail("expected 'indices : coefficient'");
                std::uint32_t mask = 0;
                std::vector<int> order;
                for (auto& t : words(r.substr(0, colon))) {
                    if (t == "-") continue;
                    auto it = std::find(P.coords.begin(), P.coords.end(), t);
                    if (it == P.coords.end()) fail("unknown coordinate '" + t + "'");
                    int k = int(it - P.coords.begin());
                    if (mask >> k & 1u) fail("repeated index '" + t + "'");
                    mask |= 1u << k;
                    order.push_back(k);
                }
                Poly c = parse_poly(r.substr(colon + 1), P.coords);
                int inv = 0;
                for (std::size_t a = 0; a < order.size(); ++a)
                    for (std::size_t b = a + 1; b < order.size(); ++b)
                        if (order[a] > order[b]) ++inv;
                F += Form::basis(P.dim, mask, inv % 2 ? -c : c);
            }
            if (w[1] == "H") P.H = F;
            else P.spinors.push_back({w[1], F});
        } else {
            fail("unknown directive '" + w[0] + "'");
        }
    }
    if (P.dim == 0) throw std::runtime_error("patch: no coords");
    if (!P.data.Jp.empty() && !has_jm) P.data.Jm = P.data.Jp;
    return P;
}

Form parse_three_form(const std::string& text, int& dim, std::vector<std::string>& coords)
{
    Patch p = parse_patch(text);
    dim = p.dim;
    coords = p.coords;
    for (auto& [m, c] : p.H.terms())
        if (popc(m) != 3) throw std::runtime_error("patch: H must be a 3-form");
    return p.H;
}

} // namespace lf::geo
