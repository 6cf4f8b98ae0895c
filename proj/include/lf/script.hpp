#pragma once

#include "lf/dsl.hpp"
#include "lf/engine.hpp"
#include "lf/geometry.hpp"
#include "lf/suite.hpp"

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lf::dsl {

struct ScriptError : std::runtime_error {
    Loc loc;
    ScriptError(Loc l, const std::string& m) : std::runtime_error(m), loc(l) {}
};

// Builds the presentation from a resolved script and evaluates its fields.
// Presentation statements (coeff, gen, deriv, bracket, relationpack) are applied
// first, in order; fields, patches and checks are evaluated afterwards against
// the complete presentation. Bracket values are normalized with the brackets
// declared before them.
class Interpreter {
public:
    explicit Interpreter(const Script& s, std::string base_dir = ".");

    Engine& engine() { return *engine_; }
    const Presentation& pres() const { return engine_->pres(); }

    const std::vector<std::pair<std::string, State>>& fields() const { return fields_; }
    std::optional<State> field(const std::string& name) const;
    const geo::Patch* patch(const std::string& name) const;

    // value of an expression: a state-valued polynomial in lam, chi
    Br eval(const Expr& e);
    State eval_state(const Expr& e); // must not depend on lam, chi
    Gauss eval_number(const Expr& e);

    // run every check statement; one report entry per check
    suite::Report run_checks();
    // central charge of the first check n22(c), if any
    std::optional<Gauss> n22_charge();

    std::string render(const State& s) const { return render_state(pres(), s); }
    std::string render(const Br& b) const { return render_br(pres(), b); }

private:
    enum class Mode { scalar, field };
    Br eval(const Expr& e, Mode m, Engine* eng);
    void check(const Stmt& st, suite::Report& r);

    Script script_;
    std::string base_;
    Presentation pres_;
    std::unique_ptr<Engine> engine_;
    std::vector<std::pair<std::string, State>> fields_;
    std::vector<std::pair<std::string, geo::Patch>> patches_;
    std::vector<std::string> coeffs_;
};

// parse + resolve + build; throws ScriptError with the first diagnostic
std::unique_ptr<Interpreter> load(const Script& s, const std::string& base_dir = ".");

} // namespace lf::dsl
