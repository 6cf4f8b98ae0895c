#include "lf/presentation.hpp"

#include <algorithm>

namespace lf {

std::uint32_t Presentation::add_generator(const std::string& name, bool odd, int weight2)
{
    if (by_name_.count(name)) throw std::invalid_argument("generator redefined: " + name);
    if (gens_.size() >= (1u << 15)) throw std::length_error("too many generators");
    std::uint32_t i = std::uint32_t(gens_.size());
    gens_.push_back({name, odd, weight2, GenKind::ordinary, 0});
    by_name_[name] = i;
    return i;
}

std::uint32_t Presentation::add_function(const std::string& name)
{
    if (by_name_.count(name)) throw std::invalid_argument("generator redefined: " + name);
    std::uint32_t i = std::uint32_t(gens_.size());
    SymId s = symbols::intern(name);
    gens_.push_back({name, false, 0, GenKind::function, s});
    by_name_[name] = i;
    fsym_[s] = i;
    return i;
}

std::optional<std::uint32_t> Presentation::find(const std::string& name) const
{
    auto it = by_name_.find(name);
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
}

std::uint32_t Presentation::index(const std::string& name) const
{
    auto i = find(name);
    if (!i) throw std::invalid_argument("unknown generator: " + name);
    return *i;
}

int Presentation::weight2(const Monomial& m) const
{
    int w = 0;
    for (Letter l : m) w += weight2(l);
    return w;
}

void Presentation::set_bracket(std::uint32_t a, std::uint32_t b, const Br& v)
{
    br_[{a, b}] = v;
}

const Br* Presentation::bracket(std::uint32_t a, std::uint32_t b) const
{
    auto it = br_.find({a, b});
    return it == br_.end() ? nullptr : &it->second;
}

void Presentation::set_anchor(std::uint32_t g, std::uint32_t f, const CoeffExpr& v)
{
    anchor_[{g, f}] = v;
}

const CoeffExpr* Presentation::anchor(std::uint32_t g, std::uint32_t f) const
{
    auto it = anchor_.find({g, f});
    return it == anchor_.end() ? nullptr : &it->second;
}

std::optional<std::uint32_t> Presentation::function_of(SymId s) const
{
    auto it = fsym_.find(s);
    if (it == fsym_.end()) return std::nullopt;
    return it->second;
}

State Presentation::from_coeff(const CoeffExpr& f) const
{
    State r;
    for (auto& [m, c] : f.terms()) {
        Monomial mono;
        SymMono rest;
        for (auto& [s, e] : m) {
            auto g = function_of(s);
            if (!g) {
                rest.emplace_back(s, e);
                continue;
            }
            for (std::uint32_t k = 0; k < e; ++k) mono.push_back(letter(*g));
        }
        std::sort(mono.begin(), mono.end());
        CoeffExpr k;
        k.add_term(rest, c);
        r.add(mono, simplify(k));
    }
    return r;
}

CoeffExpr Presentation::simplify(const CoeffExpr& c) const
{
    if (rules_.empty() || c.is_const()) return c;
    CoeffExpr cur = c;
    for (int pass = 0; pass < 16; ++pass) {
        bool hit = false;
        CoeffExpr nxt = cur.substitute([&](SymId s) -> std::optional<CoeffExpr> {
            auto it = rules_.find(s);
            if (it == rules_.end()) return std::nullopt;
            hit = true;
            return it->second;
        });
        cur = nxt;
        if (!hit) break;
    }
    return cur;
}

} // namespace lf
