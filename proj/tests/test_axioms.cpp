#include "lf/models.hpp"
#include "lf/sample.hpp"

#include <doctest.h>

using namespace lf;

TEST_CASE("skew-symmetry on random pairs")
{
    for (int n = 1; n <= 2; ++n) {
        Engine e(free_sigma_model(n));
        std::mt19937_64 rng(100 + n);
        SampleLimits lim;
        for (int i = 0; i < 100; ++i) {
            State a = random_state(e, rng, lim), b = random_state(e, rng, lim);
            Br r = e.skew_residual(a, b);
            INFO(render_state(e.pres(), a) << " , " << render_state(e.pres(), b) << " -> " << render_br(e.pres(), r));
            CHECK(r.is_zero());
        }
    }
}

TEST_CASE("Jacobi on random triples")
{
    for (int n = 1; n <= 2; ++n) {
        Engine e(free_sigma_model(n));
        std::mt19937_64 rng(200 + n);
        SampleLimits lim;
        lim.max_weight2 = 3;
        for (int i = 0; i < 100; ++i) {
            State a = random_state(e, rng, lim), b = random_state(e, rng, lim), c = random_state(e, rng, lim);
            Br r = e.jacobi_residual(a, b, c);
            INFO(render_state(e.pres(), a) << " , " << render_state(e.pres(), b) << " , "
                                           << render_state(e.pres(), c) << " -> " << render_br(e.pres(), r));
            CHECK(r.is_zero());
        }
    }
}
