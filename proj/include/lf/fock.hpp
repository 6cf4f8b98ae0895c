#pragma once

#include "lf/engine.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace lf::fock {

struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct Underdetermined : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One component field: the lowest component g or S g of a generator.
struct Component {
    std::string name;
    bool odd = false;
    int weight2 = 0;
    std::uint32_t gen = 0;
    bool s = false;
};

// creation mode X_{(-k)}, k >= 1: (component << 12) | k
using ModeId = std::uint32_t;
inline ModeId mode_id(std::uint32_t comp, std::uint32_t k) { return (comp << 12) | k; }
inline std::uint32_t mode_comp(ModeId m) { return m >> 12; }
inline std::uint32_t mode_k(ModeId m) { return m & 0xFFF; }

// sorted product of creation modes applied to the vacuum (bosons repeat)
using FMono = std::vector<ModeId>;
using Vec = std::map<FMono, Gauss>;

void axpy(Vec& y, const Gauss& a, const Vec& x);
Vec scaled(const Vec& x, const Gauss& a);
bool vec_zero(const Vec& v);
std::string vec_str(const Vec& v, const std::function<std::string(ModeId)>& name);

// Free superfield system read off a presentation whose generator brackets are
// constants α + βχ. Component brackets and mode commutators are derived here,
// independently of the bracket engine.
class Model {
public:
    explicit Model(const Presentation& p);

    const std::vector<Component>& components() const { return comps_; }
    std::uint32_t comp_of(std::uint32_t gen, bool s) const;
    bool odd(ModeId m) const { return comps_[mode_comp(m)].odd; }
    int weight2(ModeId m) const { return comps_[mode_comp(m)].weight2 + 2 * (int(mode_k(m)) - 1); }
    int weight2(const FMono& m) const;
    int weight2(const Vec& v) const; // max over terms, -1 for zero
    std::string mode_name(ModeId m) const;

    // ordinary λ-bracket [X_λ Y] = c0 + c1 λ between components
    Gauss c0(std::uint32_t x, std::uint32_t y) const { return c0_[x][y]; }
    Gauss c1(std::uint32_t x, std::uint32_t y) const { return c1_[x][y]; }
    // [X_(m), Y_(n)] graded commutator (a scalar)
    Gauss mode_commutator(std::uint32_t x, long m, std::uint32_t y, long n) const;

    // X_(n) on a monomial
    Vec mode(std::uint32_t comp, long n, const FMono& v) const;
    Vec mode(std::uint32_t comp, long n, const Vec& v) const;

    const Presentation& pres() const { return p_; }

private:
    Presentation p_;
    std::vector<Component> comps_;
    std::vector<std::vector<Gauss>> c0_, c1_;
};

// Field expressions built from components; S and T act structurally.
struct Node;
using Field = std::shared_ptr<const Node>;
struct Node {
    enum class Kind { vac, leaf, no, sum } kind = Kind::vac;
    std::uint32_t comp = 0, t = 0;
    Field a, b;
    std::vector<std::pair<Gauss, Field>> terms;
    bool odd = false;
    int weight2 = 0;
};

Field vac();
Field leaf(const Model& M, std::uint32_t comp, std::uint32_t t = 0);
Field normal(const Field& a, const Field& b);
Field sum(const std::vector<std::pair<Gauss, Field>>& terms);
Field apply_S(const Model& M, const Field& f);
Field apply_T(const Model& M, const Field& f);
// engine state -> field (letter chains become right-nested products); coefficients must be numbers
Field from_state(const Model& M, const State& s);

// Exact mode action on the untruncated module.
class Evaluator {
public:
    explicit Evaluator(const Model& M) : M_(M) {}
    Vec apply(const Field& f, long n, const FMono& v);
    Vec apply(const Field& f, long n, const Vec& v);
    // f_{(j|J)}: J = 1 is f_(j), J = 0 is (S f)_(j)
    Vec apply_mode(const Field& f, long j, int J, const Vec& v);
    Vec state(const Field& f) { return apply(f, -1, Vec{{FMono{}, Gauss(1)}}); }
    Vec state(const State& s) { return state(from_state(M_, s)); }
    const Model& model() const { return M_; }
    std::size_t memo_size() const { return memo_.size(); }

private:
    const Model& M_;
    std::map<std::tuple<const Node*, long, FMono>, Vec> memo_;
    std::map<const Node*, Field> keep_; // pins S-images used in apply_mode
};

// Weight-truncated basis: total weight2 <= cutoff2, and extra(m) <= bound for
// every monomial (by default extra counts weight-0 creation modes, bound 0).
struct Basis {
    std::vector<FMono> states;
    std::map<FMono, std::size_t> index;
    int cutoff2 = 0;
    bool contains(const FMono& m) const { return index.count(m) != 0; }
    std::size_t size() const { return states.size(); }
};

std::size_t memory_budget(); // env LF_FOCK_MAX_STATES, default 2,000,000

Basis build_fock(const Model& M, int cutoff2, int zero_mode_bound = 0,
                 const std::function<bool(const FMono&)>& accept = {});

Vec project(const Vec& v, const Basis& B, std::size_t* dropped = nullptr);

// sparse column-major matrix over Gaussian rationals
struct Matrix {
    std::size_t n = 0;
    std::vector<std::map<std::size_t, Gauss>> col;
    explicit Matrix(std::size_t dim = 0) : n(dim), col(dim) {}
    bool is_zero() const;
    std::size_t nnz() const;
    Matrix operator*(const Matrix& o) const;
    Matrix& operator+=(const Matrix& o);
    Matrix operator-(const Matrix& o) const;
    Matrix operator+(const Matrix& o) const { Matrix r = *this; r += o; return r; }
    Matrix scaled(const Gauss& a) const;
    std::vector<Gauss> apply(const std::vector<Gauss>& x) const;
    std::vector<std::tuple<std::size_t, std::size_t, Gauss>> entries() const;
};
Matrix graded_commutator(const Matrix& a, bool a_odd, const Matrix& b, bool b_odd);

// matrix of f_{(j|J)} on the basis; images leaving the basis are dropped
Matrix operator_matrix(Evaluator& ev, const Field& f, long j, int J, const Basis& B);

// a_{(j|J)} b read off from graded commutators [a_{(j|J)}, b_(-1)] on the vacuum,
// computed inside the truncated module. Throws Underdetermined if b leaves it.
std::map<std::pair<std::uint32_t, std::uint32_t>, Vec> commutator_structure(Evaluator& ev, const Field& a,
                                                                              const Field& b, const Basis& B);

struct Comparison {
    std::size_t modes_checked = 0;
    std::size_t mismatches = 0;
    std::string first_mismatch;
    bool ok() const { return mismatches == 0; }
};
// engine [a_Λ b] against the oracle, mode by mode
Comparison compare_with_engine(Engine& e, Evaluator& ev, const State& a, const State& b, const Basis& B);

// [a_(m), b_(n)] − Σ_j C(m,j) (a_(j) b)_(m+n−j) on every basis vector, exact
Comparison check_borcherds(Evaluator& ev, const Field& a, const Field& b, long m, long n, const Basis& B);

// sparse dump: "row col re im" per line, exact rationals
std::string dump_matrix(const Matrix& m);

} // namespace lf::fock
