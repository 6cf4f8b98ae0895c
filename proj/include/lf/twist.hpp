#pragma once

#include "lf/fock.hpp"
#include "lf/linalg.hpp"
#include "lf/models.hpp"

#include <memory>
#include <string>
#include <vector>

namespace lf::twist {

using fock::Basis;
using fock::Evaluator;
using fock::Field;
using fock::Vec;

struct ModeTerm {
    Field f;
    long j = 0;
    int J = 1;
    Gauss c;
};

// a linear combination of field modes f_{(j|J)}, applied exactly
struct ZeroMode {
    std::string label;
    bool odd = false;
    std::vector<ModeTerm> terms;
};

Vec apply(Evaluator& ev, const ZeroMode& op, const Vec& v);
ZeroMode combine(const std::string& label, const ZeroMode& a, const Gauss& ca, const ZeroMode& b, const Gauss& cb);
// the same operator with one term coefficient multiplied by -1
ZeroMode flip_term(const ZeroMode& op, std::size_t term);

struct SectorOps {
    ZeroMode L0, J0, Q0, G0, G0_literal;
};

// L0 = ½(H_(1|0) + iJ_(0|1)), J0 = −iJ_(0|1), Q0 = ½(H_(0|1) + iJ_(0|0)),
// G0 = ½(H_(1|1) − iJ_(1|0)); G0_literal = ½(H_(0|1) − iJ_(0|0)).
SectorOps sector_ops(const fock::Model& M, const State& J, const State& H, const std::string& tag);

struct ZeroModes {
    SectorOps plus, minus;
};
ZeroModes zero_modes(const fock::Model& M, const NamedFields& f);

enum class Diff { Qplus, Qminus, QB, QA };
Diff parse_diff(const std::string& s); // "Q+", "Q-", "QB", "QA"
std::string diff_name(Diff d);
ZeroMode differential(const ZeroModes& z, Diff d);

// Flat free sigma model with its fields and oracle, kept together.
struct FlatSetup {
    std::unique_ptr<Engine> engine;
    NamedFields fields;
    std::unique_ptr<fock::Model> model;
    std::unique_ptr<Evaluator> ev;
    ZeroModes ops;
};
std::unique_ptr<FlatSetup> flat_setup(int n);

// Truncation preserved by all zero modes: untwisted weight2 <= cutoff2,
// deg(B) + occ(S B_(-1)) + occ(Psib_(-1)) <= D, deg(Bb) <= Dbar.
struct Truncation {
    int cutoff2 = 4;
    int D = 2;
    int Dbar = 1;
};
Basis twist_basis(const fock::Model& M, const Truncation& t);

struct OpResidual {
    std::string name;
    std::size_t columns = 0;
    std::size_t nonzero_columns = 0;
    bool ok() const { return nonzero_columns == 0; }
};

// exact residual columns of X(Y v) ± Y(X v) − Z v over the basis
OpResidual commutator_residual(Evaluator& ev, const std::string& name, const ZeroMode& X, const ZeroMode& Y,
                               const ZeroMode* Z, const Basis& B);
OpResidual square_residual(Evaluator& ev, const std::string& name, const ZeroMode& X, const Basis& B);

struct BrstReport {
    std::vector<OpResidual> checks;      // the required identities
    std::vector<OpResidual> diagnostics; // literal G0 variants, reported only
    OpResidual negative_control;         // must be nonzero
    bool ok() const;
};
BrstReport brst_check(Evaluator& ev, const ZeroModes& z, const Basis& B);

// joint generalized eigenspace of (J0+, J0-, L0+); L0- is then fixed by
// L0+ + L0- = w − ½(J0+ + J0-)
struct Cell {
    Q hp, hm;
    long qp = 0, qm = 0;
    int weight2 = 0; // untwisted
    std::vector<Vec> vectors;
};
struct Spectrum {
    std::vector<Cell> cells;
    bool complete = true;          // cells exhaust every block
    bool l0_diagonalizable = true; // false when L0+ has a nilpotent part
    bool j0_diagonalizable = true;
    bool total_weight_ok = true;
    bool closed = true; // L0, J0 map the basis into itself
};
Spectrum spectrum(Evaluator& ev, const ZeroModes& z, const Basis& B);

struct CohomologyRow {
    long degree = 0; // Q+: J0+ charge, Q-: J0- charge, QB: sum, QA: J0+ − J0-
    long qp = 0, qm = 0;
    std::size_t dim = 0, rank_out = 0, rank_in = 0, h = 0;
};
struct CohomologyTable {
    Diff diff = Diff::Qplus;
    Q hp, hm;
    std::vector<CohomologyRow> rows;
    bool closed = true; // d maps every cell into the neighbouring cell
    bool stable = true; // cell complete at this cutoff
    long euler = 0;
    std::size_t total() const;
};
CohomologyTable cohomology(Evaluator& ev, const ZeroModes& z, const Basis& B, const Spectrum& sp, Diff d,
                           const Q& hp, const Q& hm);

} // namespace lf::twist
