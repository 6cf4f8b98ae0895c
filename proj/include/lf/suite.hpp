#pragma once

#include "lf/geometry.hpp"
#include "lf/twist.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace lf::suite {

struct Check {
    std::string name;
    bool ok = false;
    std::string detail;
};

struct Report {
    std::string title;
    std::vector<Check> checks;
    double seconds = 0;
    bool ok() const;
    void add(std::string name, bool ok, std::string detail = {});
};

// six families of the N=2,2 relations in the flat model of complex dimension n,
// with c = 3n per sector, and the central coefficients of [H±_Λ H±]
Report n22(int n);
// [J₁_Λ J₁] + H + (dim M) λχ = 0 with J₁ = J⁺ + J⁻, H = H⁺ + H⁻
Report diagonal(int n);

struct AxiomOptions {
    int samples = 200;
    std::uint64_t seed = 1;
    int pair_weight2 = 4;
    int triple_weight2 = 3;
};
// skew-symmetry, Jacobi and quasi-associativity (engine against the oracle)
Report axioms(int n, const AxiomOptions& o);
// the same over any presentation; the oracle comparison needs free generators
Report axioms(const Presentation& p, const AxiomOptions& o);

struct OracleOptions {
    int max_weight2 = 4;    // both arguments
    int max_letters = 3;
    int max_zero = 2;       // weight-zero letters per argument
    int cutoff2 = 5;        // raised per pair when the bracket needs more room
    int stable_cutoff2 = 7; // second cutoff for the central coefficient
    int jobs = 1;
};
// canonical monomials of the free model with the given limits
std::vector<Monomial> canonical_monomials(const Presentation& p, int max_weight2, int max_letters, int max_zero);
// every pair of canonical monomials, engine against oracle
Report oracle(int n, const OracleOptions& o);
// any presentation with constant generator brackets; the central check of
// [H+_Λ H+] runs only for central_n > 0 (the free model of that dimension)
Report oracle(const Presentation& p, const OracleOptions& o, int central_n = 0);

struct TwistOptions {
    twist::Truncation brst{2, 2, 1};
    twist::Truncation cohomology{4, 2, 1};
};
Report twist_suite(const TwistOptions& o);

struct GeometryOptions {
    int trials = 50;
    std::uint64_t seed = 7;
};
Report courant(const geo::Form& H, int trials, std::uint64_t seed);
Report geometry(const GeometryOptions& o);
// constant bihermitian data on a patch: frames and structure functions,
// modular classes and Poisson divergence, dilaton against v±
Report frames_report(const geo::Bihermitian& d, const geo::Form& H, const std::string& tag = {});
Report modular_report(const geo::Bihermitian& d, const geo::Form& H, const std::string& tag = {});
Report dilaton_report(const geo::Bihermitian& d, const geo::Form& H, const std::string& tag = {});
Report trace();

} // namespace lf::suite
