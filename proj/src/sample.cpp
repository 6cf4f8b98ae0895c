#include "lf/sample.hpp"

namespace lf {

State random_monomial(Engine& e, std::mt19937_64& rng, const SampleLimits& lim)
{
    const auto& p = e.pres();
    std::vector<std::uint32_t> gens;
    for (std::uint32_t g = 0; g < p.size(); ++g)
        if (p.gen(g).kind == GenKind::ordinary) gens.push_back(g);
    if (gens.empty()) return State::vac();
    std::uniform_int_distribution<int> nl(1, lim.max_letters);
    std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
    std::uniform_int_distribution<int> dec(0, lim.max_decor);
    for (int attempt = 0; attempt < 64; ++attempt) {
        int n = nl(rng);
        std::vector<Letter> ls;
        int w = 0;
        for (int i = 0; i < n; ++i) {
            int d = dec(rng);
            Letter l = p.letter(pick(rng), std::uint32_t(d / 2), std::uint32_t(d % 2));
            w += p.weight2(l);
            ls.push_back(l);
        }
        if (w > lim.max_weight2) continue;
        State s = e.chain(ls);
        if (!s.is_zero()) return s;
    }
    return State::mono({p.letter(gens[0])});
}

State random_state(Engine& e, std::mt19937_64& rng, const SampleLimits& lim)
{
    std::uniform_int_distribution<int> nt(1, lim.max_terms);
    std::uniform_int_distribution<long> coef(-3, 3);
    State r;
    int n = nt(rng);
    int parity = -1;
    for (int i = 0; i < 4 * n && int(r.size()) < n; ++i) {
        State m = random_monomial(e, rng, lim);
        int pm = m.parity();
        if (pm < 0) continue;
        if (parity >= 0 && pm != parity) continue;
        long c = coef(rng);
        if (c == 0) c = 1;
        r += m.scaled(CoeffExpr(c));
        if (!r.is_zero()) parity = r.parity();
    }
    if (r.is_zero()) return random_monomial(e, rng, lim);
    return r;
}

} // namespace lf
