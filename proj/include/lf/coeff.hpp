#pragma once

#include "lf/gauss.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace lf {

using SymId = std::uint32_t;

// Process-wide interning of symbol names.
namespace symbols {
SymId intern(const std::string& name);
const std::string& name(SymId id);
std::optional<SymId> find(const std::string& name);
} // namespace symbols

// sorted by symbol id, exponents > 0
using SymMono = std::vector<std::pair<SymId, std::uint32_t>>;

// Polynomial in commuting symbols over the Gaussian rationals.
class CoeffExpr {
public:
    CoeffExpr() = default;
    CoeffExpr(const Gauss& c);
    CoeffExpr(long c) : CoeffExpr(Gauss(c)) {}
    static CoeffExpr sym(SymId s, std::uint32_t e = 1);
    static CoeffExpr sym(const std::string& name) { return sym(symbols::intern(name)); }

    bool is_zero() const { return t_.empty(); }
    bool is_const() const { return t_.empty() || (t_.size() == 1 && t_.begin()->first.empty()); }
    Gauss const_value() const; // throws unless is_const()
    const std::map<SymMono, Gauss>& terms() const { return t_; }

    CoeffExpr& operator+=(const CoeffExpr& o);
    CoeffExpr& operator-=(const CoeffExpr& o);
    CoeffExpr& operator*=(const Gauss& c);
    CoeffExpr operator-() const;
    void add_term(const SymMono& m, const Gauss& c);

    friend CoeffExpr operator+(CoeffExpr a, const CoeffExpr& b) { return a += b; }
    friend CoeffExpr operator-(CoeffExpr a, const CoeffExpr& b) { return a -= b; }
    friend CoeffExpr operator*(const CoeffExpr& a, const CoeffExpr& b);
    friend CoeffExpr operator*(CoeffExpr a, const Gauss& c) { return a *= c; }
    friend CoeffExpr operator*(const Gauss& c, CoeffExpr a) { return a *= c; }
    friend bool operator==(const CoeffExpr& a, const CoeffExpr& b) { return a.t_ == b.t_; }
    friend bool operator!=(const CoeffExpr& a, const CoeffExpr& b) { return !(a == b); }
    friend bool operator<(const CoeffExpr& a, const CoeffExpr& b) { return a.t_ < b.t_; }

    // Leibniz extension of a derivation given on symbols
    CoeffExpr derive(const std::function<CoeffExpr(SymId)>& d) const;
    // replace symbols for which f returns a value
    CoeffExpr substitute(const std::function<std::optional<CoeffExpr>(SymId)>& f) const;
    std::set<SymId> symbol_set() const;
    CoeffExpr conj() const; // conjugates numbers only
    std::uint32_t degree_in(SymId s) const;

    std::string str() const;
    // true if str() needs parentheses when used as a factor
    bool compound() const;
    std::size_t hash() const;

private:
    std::map<SymMono, Gauss> t_;
};

SymMono mono_mul(const SymMono& a, const SymMono& b);
std::string mono_str(const SymMono& m);

} // namespace lf
