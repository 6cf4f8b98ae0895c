#pragma once

#include "lf/coeff.hpp"
#include "lf/gauss.hpp"
#include "lf/linalg.hpp"

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace lf::geo {

// Polynomial in real coordinates x^0..x^{m-1} over the Gaussian rationals.
class Poly {
public:
    using Exp = std::vector<int>;

    Poly() = default;
    explicit Poly(int dim) : dim_(dim) {}
    static Poly constant(int dim, const Gauss& c);
    static Poly var(int dim, int i);
    // z^a = x^{2a} + i x^{2a+1}, zbar^a its conjugate
    static Poly z(int dim, int a);
    static Poly zbar(int dim, int a);

    int dim() const { return dim_; }
    bool is_zero() const { return t_.empty(); }
    bool is_const() const;
    Gauss const_value() const;
    const std::map<Exp, Gauss>& terms() const { return t_; }
    int degree() const;

    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(const Gauss& c);
    Poly operator-() const;
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    friend Poly operator*(Poly a, const Gauss& c) { return a *= c; }
    friend Poly operator*(const Gauss& c, Poly a) { return a *= c; }
    friend bool operator==(const Poly& a, const Poly& b) { return a.t_ == b.t_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    Poly d(int i) const; // ∂/∂x^i
    Poly conj() const;   // coordinates are real
    void add_term(const Exp& e, const Gauss& c);
    std::string str(const std::vector<std::string>& names = {}) const;

private:
    int dim_ = 0;
    std::map<Exp, Gauss> t_;
};

Poly random_poly(int dim, int degree, std::mt19937_64& rng, int max_terms = 3);
// polynomial expression in the given coordinate names; numbers p/q, i, + - * ^ ( )
Poly parse_poly(const std::string& text, const std::vector<std::string>& names);

using VecField = std::vector<Poly>;

// Inhomogeneous differential form, keyed by index bitmask.
class Form {
public:
    Form() = default;
    explicit Form(int dim) : dim_(dim) {}
    static Form function(const Poly& f);
    static Form one_form(const std::vector<Poly>& xi);
    static Form basis(int dim, std::uint32_t mask, const Poly& c);

    int dim() const { return dim_; }
    bool is_zero() const { return t_.empty(); }
    const std::map<std::uint32_t, Poly>& terms() const { return t_; }
    Poly at(std::uint32_t mask) const;
    Form part(int degree) const;
    Poly top() const;

    Form& operator+=(const Form& o);
    Form& operator-=(const Form& o);
    Form& operator*=(const Gauss& c);
    friend Form operator+(Form a, const Form& b) { return a += b; }
    friend Form operator-(Form a, const Form& b) { return a -= b; }
    friend Form operator*(Form a, const Gauss& c) { return a *= c; }
    friend bool operator==(const Form& a, const Form& b) { return a.t_ == b.t_; }

    Form times(const Poly& f) const;
    Form wedge(const Form& o) const;
    Form d() const;
    Form interior(const VecField& X) const;
    Form reversed() const; // degree-k part times (−1)^{k(k−1)/2}
    Form conj() const;
    std::vector<Poly> one_form_components() const;
    std::string str(const std::vector<std::string>& names = {}) const;

private:
    int dim_ = 0;
    std::map<std::uint32_t, Poly> t_;
    void add(std::uint32_t mask, const Poly& p);
};

Form exp_nilpotent(const Form& w); // e^w for an even form without degree-0 part

// Section X + ξ of (T ⊕ T*) ⊗ C.
struct ESection {
    VecField X;
    std::vector<Poly> xi;

    static ESection zero(int dim);
    static ESection vector(const VecField& X);
    static ESection form(const std::vector<Poly>& xi);
    int dim() const { return int(X.size()); }
    bool is_zero() const;
    ESection& operator+=(const ESection& o);
    ESection& operator-=(const ESection& o);
    friend ESection operator+(ESection a, const ESection& b) { return a += b; }
    friend ESection operator-(ESection a, const ESection& b) { return a -= b; }
    ESection times(const Poly& f) const;
    ESection scaled(const Gauss& c) const;
    ESection conj() const;
    std::string str(const std::vector<std::string>& names = {}) const;
};

Poly apply_vector(const VecField& X, const Poly& f);
VecField lie_bracket(const VecField& X, const VecField& Y);
// [X,Y] + L_X η − ι_Y dξ + ι_Y ι_X H
ESection dorfman(const ESection& A, const ESection& B, const Form& H);
// ½(ι_X η + ι_Y ξ)
Poly pairing(const ESection& A, const ESection& B);
ESection D_of(const Poly& f); // 𝒟f = df, from ⟨𝒟f, A⟩ = ½ π(A) f

struct AxiomResidual {
    std::string name;
    std::size_t trials = 0;
    std::size_t failures = 0;
    bool ok() const { return failures == 0; }
};
// axioms (1)–(5), the Dorfman/Courant relation, π∘𝒟 = 0 and ⟨𝒟f,𝒟g⟩ = 0
std::vector<AxiomResidual> courant_axioms_check(const Form& H, int trials, std::uint64_t seed, int degree = 2);

Poly mukai(const Form& phi, const Form& psi); // [φ^⊤ ∧ ψ]_top
Form clifford(const ESection& A, const Form& phi);

// constant linear algebra on T ⊕ T*
DMat mat_mul(const DMat& a, const DMat& b);
DMat mat_add(const DMat& a, const DMat& b, const Gauss& cb = Gauss(1));
DMat mat_scaled(const DMat& a, const Gauss& c);
DMat mat_transpose(const DMat& a);
DMat mat_inverse(const DMat& a); // throws if singular
DMat identity(std::size_t n);
DMat block(const DMat& a, const DMat& b, const DMat& c, const DMat& d);
bool mat_equal(const DMat& a, const DMat& b);

// constant bihermitian data (b = 0)
struct Bihermitian {
    DMat g, Jp, Jm;
    int dim() const { return int(g.size()); }
    DMat omega(bool plus) const { return mat_mul(g, plus ? Jp : Jm); } // ω = gJ as a map T → T*
};
struct BihermitianCheck {
    bool almost_complex = true;  // J±² = −1
    bool hermitian = true;       // J±^T g J± = g
    bool gcs_square = true;      // 𝒥ᵢ² = −1
    bool gcs_commute = true;
    bool gcs_orthogonal = true;  // 𝒥ᵢ preserve the pairing
    bool metric_positive = true; // G = −𝒥₁𝒥₂ symmetric positive definite on T ⊕ T*
    bool metric_form = true;     // G = [[0, g⁻¹], [g, 0]]
    bool ok() const;
};
struct GCS {
    DMat J1, J2, G;
};
GCS bihermitian_to_gcs(const Bihermitian& d);
BihermitianCheck check_bihermitian(const Bihermitian& d, const GCS& s);
// the Kähler example form: 𝒥₁ = diag(−J, J*), 𝒥₂ = [[0, ω⁻¹], [−ω, 0]]
GCS kahler_gcs(const DMat& g, const DMat& J);
// Poisson tensors P₁,₂ = −ω₊⁻¹ ± ω₋⁻¹
std::pair<DMat, DMat> poisson_tensors(const Bihermitian& d);
// g = scale·1 in x^{2a}, x^{2a+1}, J ∂_{2a} = ∂_{2a+1}; scale 2 gives g_{αβ̄} = δ
Bihermitian flat_kahler(int n, const Gauss& scale = Gauss(2));

struct Frames {
    std::vector<ESection> ep, epd, em, emd; // e_α^+, e^α_+, e_α^−, e^α_−
    int n() const { return int(ep.size()); }
};
// e_α^± = v_α ± g v_α for v_α spanning T^{1,0}_±, duals from the pairing
Frames frames(const Bihermitian& d);
struct FrameCheck {
    bool duality = true;     // ⟨e_α^±, e^β_±⟩ = δ
    bool isotropic = true;   // ⟨e^±, e^±⟩ = 0 and ⟨e_±, e_±⟩ = 0 within L̄
    bool orthogonal = true;  // pairings across sectors vanish
    bool conjugation = true; // conj(e_α^±) = ±g_{ᾱβ} e^β_±
    bool involutive = true;  // [e^±_α, e^±_β] = 0, [e_±^α, e_±^β] = 0
    bool eigen = true;       // L₁ = L₁⁺ ⊕ L₁⁻ is +i for 𝒥₁, L₁⁺ ⊕ conj(L₁⁻) for 𝒥₂
    bool ok() const;
};
FrameCheck check_frames(const Bihermitian& d, const Frames& f, const Form& H);

// c, d, e of the adapted frames; every entry is a patch function
struct StructureFunctions {
    // index order: [α][β][γ]
    std::vector<std::vector<std::vector<Poly>>> c_lower_p, c_lower_m, c_upper_p, c_upper_m, d_lower, e_lower,
        d_upper, e_upper;
    bool all_zero() const;
};
StructureFunctions structure_functions(const Frames& f, const Form& H);

// μ = e^{logd} dx^0 ∧ ... ∧ dx^{m-1}
struct LogDensity {
    Poly logd;
};
// (div P)^j = ∂_i P^{ij} + ∂_i(log μ̃) P^{ij}
std::vector<Poly> divergence(const std::vector<std::vector<Poly>>& P, const LogDensity& mu);
// div_μ(X) with div_μ(e) μ = −Lie_{π e} μ
Poly divergence_of_section(const ESection& e, const LogDensity& mu);

// θ(e_i) = c_{ij}^j − div_μ(e_i) − π(e_i) κ, where the chosen section of
// det L* is e^κ e^1 ∧ ... ∧ e^r
std::vector<Poly> modular_representative(const std::vector<ESection>& L, const std::vector<ESection>& duals,
                                         const Form& H, const LogDensity& mu, const Poly& kappa);

// spinor e^h ρ₀ with ρ₀ constant
struct ExpSpinor {
    Poly h;
    Form rho0;
};
// χ(e_i) with d_H ρ = χ·ρ, L* identified with conj(L) by the natural pairing
std::vector<Poly> chi_section(const std::vector<ESection>& L, const std::vector<ESection>& duals,
                              const ExpSpinor& rho);
// κ with conj(ρ) = e^κ (e^1 ∧ ... ∧ e^r)·ρ, and the Mukai density of (ρ, conj ρ)
struct SpinorVolume {
    Poly kappa;
    LogDensity mu;
    Gauss mu_const; // (ρ₀, conj ρ₀) top coefficient
};
SpinorVolume spinor_volume(const std::vector<ESection>& L, const std::vector<ESection>& duals, const ExpSpinor& rho);

// Φ = −½ log((ρ, ρ̄)/vol_g); carried as a constant part and a polynomial part
struct Dilaton {
    Gauss mukai_const; // (ρ₀, ρ̄₀) top coefficient
    Gauss det_g;       // vol_g = √det g dx
    Poly poly;         // −½ (h + h̄)
    bool constant() const { return poly.is_zero() || poly.is_const(); }
    std::vector<Poly> d() const;
};
Dilaton dilaton(const ExpSpinor& rho, const DMat& g);

// v^±_i = ±½ J^j_i J^k_l g^{ml} H_{kjm}
std::vector<Poly> v_form(const Bihermitian& d, const Form& H, bool plus);

// c = (e^{iω}, e^{−iω}) / (Ω, Ω̄) in the flat Kähler patch, with e^{iω}
// annihilated by L₂ of the Kähler example
struct MukaiSign {
    Gauss c;
    Gauss expected; // (−1)^{m(m−1)/2}, m = real dimension
    bool ok() const { return c == expected; }
};
MukaiSign mukai_sign_check(int n);

// Lie algebroid complex ∧L* ⊗ ∧W with polynomial coefficients in z, zbar,
// truncated by deg_z + wedge degree <= D and deg_zbar <= Dbar.
struct AlgebroidRow {
    int k = 0, l = 0; // L*-degree, W-degree
    std::size_t dim = 0, rank_out = 0, rank_in = 0, h = 0;
};
struct AlgebroidCohomology {
    std::vector<AlgebroidRow> rows;
    bool closed = true;      // d preserves the truncation
    bool square_zero = true; // d² = 0 on the truncated complex
    std::size_t total() const;
    std::size_t at(int k, int l) const;
};
AlgebroidCohomology algebroid_cohomology(const std::vector<ESection>& L, const std::vector<ESection>& duals,
                                         const std::vector<ESection>& W, const std::vector<ESection>& W_duals,
                                         const Form& H, int D, int Dbar);

// trace identities with the constant-structure relation pack
struct TraceResidual {
    std::string name;
    CoeffExpr value; // reduced modulo the relation pack
    bool ok() const { return value.is_zero(); }
};
std::vector<TraceResidual> trace_identities();

// patch description file
struct Patch {
    int dim = 0;
    std::vector<std::string> coords;
    Bihermitian data;
    bool has_metric = false;
    Form H;
    std::vector<std::pair<std::string, Form>> spinors;
};
Patch parse_patch(const std::string& text); // throws std::runtime_error with line numbers
Form parse_three_form(const std::string& text, int& dim, std::vector<std::string>& coords);

} // namespace lf::geo
