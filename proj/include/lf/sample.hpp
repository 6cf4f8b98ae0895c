#pragma once

#include "lf/engine.hpp"

#include <random>

namespace lf {

struct SampleLimits {
    int max_weight2 = 4;   // twice the conformal weight
    int max_letters = 3;
    int max_terms = 2;
    int max_decor = 2;     // largest S/T decoration depth
};

// Random canonical state over the ordinary generators of e's presentation.
State random_state(Engine& e, std::mt19937_64& rng, const SampleLimits& lim);
// random single monomial with exact weight2 (nullopt-like zero state if none found)
State random_monomial(Engine& e, std::mt19937_64& rng, const SampleLimits& lim);

} // namespace lf
