// One line per acceptance criterion; sub-check details follow failing lines.
// Pass -v to print every sub-check.

#include "lf/suite.hpp"

#include <cstdio>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

using namespace lf;

namespace {

struct Criterion {
    int id;
    const char* title;
    std::function<std::vector<suite::Report>()> run;
};

} // namespace

int main(int argc, char** argv)
{
    bool verbose = argc > 1 && std::strcmp(argv[1], "-v") == 0;
    std::vector<Criterion> crit = {
        {1, "N=2,2 relations in the flat n=1 model, c/3 = 1", [] { return std::vector{suite::n22(1)}; }},
        {2, "diagonal N=2 with lam chi coefficient dim M = 2", [] { return std::vector{suite::diagonal(1)}; }},
        {3, "skew-symmetry, Jacobi, quasi-associativity (200 samples, n=1,2)",
         [] {
             suite::AxiomOptions o;
             return std::vector{suite::axioms(1, o), suite::axioms(2, o)};
         }},
        {4, "engine = Fock oracle on all canonical pairs of weight <= 2, cutoff 5/2; central term stable at 7/2",
         [] { return std::vector{suite::oracle(1, suite::OracleOptions{})}; }},
        {5, "twisted zero modes: BRST identities at cutoff 2, Q0+ cohomology = d_L1+ count",
         [] { return std::vector{suite::twist_suite(suite::TwistOptions{})}; }},
        {6, "generalized geometry suite", [] { return std::vector{suite::geometry(suite::GeometryOptions{})}; }},
        {7, "structure-function trace identities", [] { return std::vector{suite::trace()}; }},
    };
    int failed = 0;
    for (auto& c : crit) {
        bool ok = true;
        double secs = 0;
        std::vector<suite::Report> reps;
        std::string error;
        try {
            reps = c.run();
        } catch (const std::exception& ex) {
            error = ex.what();
            ok = false;
        }
        std::size_t nchecks = 0;
        for (auto& r : reps) {
            ok = ok && r.ok();
            secs += r.seconds;
            nchecks += r.checks.size();
        }
        std::printf("%s criterion %d: %s [%zu checks, %.1fs]\n", ok ? "PASS" : "FAIL", c.id, c.title, nchecks, secs);
        if (!error.empty()) std::printf("    error: %s\n", error.c_str());
        for (auto& r : reps)
            for (auto& k : r.checks)
                if (verbose || !k.ok)
                    std::printf("    %s %s | %s: %s\n", k.ok ? "ok  " : "FAIL", r.title.c_str(), k.name.c_str(),
                                k.detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failed;
    }
    return failed ? 1 : 0;
}
