#pragma once

#include "lf/state.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lf {

struct MissingBracket : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class GenKind { ordinary, function };

struct Generator {
    std::string name;
    bool odd = false;
    int weight2 = 0; // twice the conformal weight
    GenKind kind = GenKind::ordinary;
    SymId sym = 0;   // function generators: the coefficient symbol they stand for
};

// Generators, Λ-brackets between them, and the anchor action on function symbols.
class Presentation {
public:
    std::uint32_t add_generator(const std::string& name, bool odd, int weight2);
    std::uint32_t add_function(const std::string& name);
    std::optional<std::uint32_t> find(const std::string& name) const;
    std::uint32_t index(const std::string& name) const; // throws
    const Generator& gen(std::uint32_t i) const { return gens_.at(i); }
    std::size_t size() const { return gens_.size(); }
    const std::vector<Generator>& generators() const { return gens_; }

    Letter letter(std::uint32_t g, std::uint32_t t = 0, std::uint32_t s = 0) const
    {
        return make_letter(g, gens_.at(g).odd, t, s);
    }
    State state(const std::string& name) const { return State::mono({letter(index(name))}); }
    int weight2(Letter l) const { return gens_.at(letter_gen(l)).weight2 + 2 * int(letter_t(l)) + int(letter_s(l)); }
    int weight2(const Monomial& m) const;

    // [a_Λ b] in the variable LAM; value given as a state-valued H-polynomial
    void set_bracket(std::uint32_t a, std::uint32_t b, const Br& v);
    const Br* bracket(std::uint32_t a, std::uint32_t b) const;
    const std::map<std::pair<std::uint32_t, std::uint32_t>, Br>& bracket_table() const { return br_; }

    // π(gen) f for a function generator f, as a polynomial in function symbols
    void set_anchor(std::uint32_t g, std::uint32_t f, const CoeffExpr& v);
    const CoeffExpr* anchor(std::uint32_t g, std::uint32_t f) const;

    // function symbol id -> generator
    std::optional<std::uint32_t> function_of(SymId s) const;
    // polynomial in function symbols (other symbols stay coefficients) -> state
    State from_coeff(const CoeffExpr& f) const;

    // constant-symbol substitutions applied to every result coefficient
    void add_rule(SymId s, const CoeffExpr& v) { rules_[s] = v; }
    const std::map<SymId, CoeffExpr>& rules() const { return rules_; }
    CoeffExpr simplify(const CoeffExpr& c) const;

    bool missing_is_zero = true;
    bool auto_derivatives = true;
    std::string label;

private:
    std::vector<Generator> gens_;
    std::map<std::string, std::uint32_t> by_name_;
    std::map<std::pair<std::uint32_t, std::uint32_t>, Br> br_;
    std::map<std::pair<std::uint32_t, std::uint32_t>, CoeffExpr> anchor_;
    std::map<SymId, std::uint32_t> fsym_;
    std::map<SymId, CoeffExpr> rules_;
};

} // namespace lf
