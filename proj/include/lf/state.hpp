#pragma once

#include "lf/hpoly.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace lf {

// A decorated generator S^s T^t g, packed so that integer order is
// (generator index, decoration depth). Bit 0 carries the generator parity.
using Letter = std::uint32_t;

inline Letter make_letter(std::uint32_t gen, bool gen_odd, std::uint32_t t = 0, std::uint32_t s = 0)
{
    return (gen << 17) | (t << 2) | (s << 1) | (gen_odd ? 1u : 0u);
}
inline std::uint32_t letter_gen(Letter l) { return l >> 17; }
inline std::uint32_t letter_t(Letter l) { return (l >> 2) & 0x7FFF; }
inline std::uint32_t letter_s(Letter l) { return (l >> 1) & 1; }
inline bool letter_gen_odd(Letter l) { return l & 1; }
inline bool letter_odd(Letter l) { return ((l & 1) ^ ((l >> 1) & 1)) != 0; }
inline Letter letter_S(Letter l)
{
    if (letter_s(l)) return make_letter(letter_gen(l), letter_gen_odd(l), letter_t(l) + 1, 0);
    return l | 2u;
}
inline Letter letter_T(Letter l, std::uint32_t k = 1)
{
    return make_letter(letter_gen(l), letter_gen_odd(l), letter_t(l) + k, letter_s(l));
}

// Right-nested normally ordered chain x1(x2(…xk)); empty = vacuum.
using Monomial = std::vector<Letter>;

bool mono_odd(const Monomial& m);
bool mono_odd(const Monomial& m, std::size_t upto);

// Linear combination of monomials with constant coefficients.
class State {
public:
    State() = default;
    static State vac(const CoeffExpr& c = CoeffExpr(1));
    static State mono(const Monomial& m, const CoeffExpr& c = CoeffExpr(1));

    void add(const Monomial& m, const CoeffExpr& c);
    State& operator+=(const State& o);
    State& operator-=(const State& o);
    friend State operator+(State a, const State& b) { return a += b; }
    friend State operator-(State a, const State& b) { return a -= b; }
    State scaled(const CoeffExpr& c) const;
    State operator-() const { return scaled(CoeffExpr(-1)); }

    bool is_zero() const { return t_.empty(); }
    const std::map<Monomial, CoeffExpr>& terms() const { return t_; }
    std::size_t size() const { return t_.size(); }
    friend bool operator==(const State& a, const State& b) { return a.t_ == b.t_; }
    friend bool operator!=(const State& a, const State& b) { return !(a == b); }
    friend bool operator<(const State& a, const State& b) { return a.t_ < b.t_; }

    // parity of every monomial must agree; returns -1 for the zero state
    int parity() const;
    template <class F>
    State map_coeffs(F&& f) const
    {
        State r;
        for (auto& [m, c] : t_) r.add(m, f(c));
        return r;
    }

private:
    std::map<Monomial, CoeffExpr> t_;
};

inline bool coeff_is_zero(const State& s) { return s.is_zero(); }
State koszul(const State& s, bool odd);
inline State scale(const State& s, const CoeffExpr& c) { return s.scaled(c); }

using Br = HPoly<State>;

inline const LambdaVar LAM{0};
inline const LambdaVar GAM{1};
inline const LambdaVar DEL{2};

} // namespace lf
