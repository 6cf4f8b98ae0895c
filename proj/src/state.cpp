#include "lf/state.hpp"

#include <stdexcept>

namespace lf {

bool mono_odd(const Monomial& m)
{
    bool p = false;
    for (Letter l : m) p ^= letter_odd(l);
    return p;
}

bool mono_odd(const Monomial& m, std::size_t upto)
{
    bool p = false;
    for (std::size_t k = 0; k < upto && k < m.size(); ++k) p ^= letter_odd(m[k]);
    return p;
}

State State::vac(const CoeffExpr& c)
{
    State s;
    s.add({}, c);
    return s;
}

State State::mono(const Monomial& m, const CoeffExpr& c)
{
    State s;
    s.add(m, c);
    return s;
}

void State::add(const Monomial& m, const CoeffExpr& c)
{
    if (c.is_zero()) return;
    auto it = t_.find(m);
    if (it == t_.end()) {
        t_.emplace(m, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) t_.erase(it);
}

State& State::operator+=(const State& o)
{
    for (auto& [m, c] : o.t_) add(m, c);
    return *this;
}

State& State::operator-=(const State& o)
{
    for (auto& [m, c] : o.t_) add(m, -c);
    return *this;
}

State State::scaled(const CoeffExpr& c) const
{
    State r;
    if (c.is_zero()) return r;
    for (auto& [m, v] : t_) r.add(m, v * c);
    return r;
}

int State::parity() const
{
    int p = -1;
    for (auto& [m, c] : t_) {
        int q = mono_odd(m) ? 1 : 0;
        if (p >= 0 && p != q) throw std::runtime_error("state of mixed parity");
        p = q;
    }
    return p;
}

State koszul(const State& s, bool odd)
{
    if (!odd) return s;
    State r;
    for (auto& [m, c] : s.terms()) r.add(m, mono_odd(m) ? -c : c);
    return r;
}

} // namespace lf
