#include "lf/models.hpp"

namespace lf {

namespace {
std::string idx(const std::string& base, int a) { return base + "[" + std::to_string(a) + "]"; }
const Gauss I = Gauss::I();
} // namespace

Presentation free_sigma_model(int n)
{
    if (n < 1) throw std::invalid_argument("free_sigma_model: n >= 1 required");
    Presentation p;
    p.label = "free_sigma_model(" + std::to_string(n) + ")";
    for (int a = 1; a <= n; ++a) p.add_generator(idx("B", a), false, 0);
    for (int a = 1; a <= n; ++a) p.add_generator(idx("Bb", a), false, 0);
    for (int a = 1; a <= n; ++a) p.add_generator(idx("Psi", a), true, 1);
    for (int a = 1; a <= n; ++a) p.add_generator(idx("Psib", a), true, 1);
    for (int a = 1; a <= n; ++a) {
        p.set_bracket(p.index(idx("Psi", a)), p.index(idx("B", a)), Br::constant(State::vac()));
        p.set_bracket(p.index(idx("Psib", a)), p.index(idx("Bb", a)), Br::constant(State::vac()));
    }
    return p;
}

Presentation uch_patch_flat(int n, const std::vector<std::string>& functions)
{
    if (n < 1) throw std::invalid_argument("uch_patch: n >= 1 required");
    Presentation p;
    p.label = "uch_patch_flat(" + std::to_string(n) + ")";
    for (const char* b : {"ep", "epd", "em", "emd"})
        for (int a = 1; a <= n; ++a) p.add_generator(idx(b, a), true, 1);
    Br two_chi = Br::term(hmono(LAM, 0, 1), State::vac(CoeffExpr(2)));
    for (int a = 1; a <= n; ++a) {
        p.set_bracket(p.index(idx("ep", a)), p.index(idx("epd", a)), two_chi);
        p.set_bracket(p.index(idx("em", a)), p.index(idx("emd", a)), two_chi);
    }
    for (auto& f : functions) p.add_function(f);
    return p;
}

Frames free_frames(Engine& e)
{
    auto& p = e.pres();
    Frames f;
    int n = 0;
    while (p.find(idx("B", n + 1))) ++n;
    for (int a = 1; a <= n; ++a) {
        State psi = p.state(idx("Psi", a)), psib = p.state(idx("Psib", a));
        State sb = e.apply_S(p.state(idx("B", a))), sbb = e.apply_S(p.state(idx("Bb", a)));
        f.ep.push_back(psi + sbb);
        f.em.push_back(psi - sbb);
        f.epd.push_back(sb + psib);
        f.emd.push_back(sb - psib);
    }
    return f;
}

Frames uch_frames(Engine& e)
{
    auto& p = e.pres();
    Frames f;
    for (int a = 1; p.find(idx("ep", a)); ++a) {
        f.ep.push_back(p.state(idx("ep", a)));
        f.epd.push_back(p.state(idx("epd", a)));
        f.em.push_back(p.state(idx("em", a)));
        f.emd.push_back(p.state(idx("emd", a)));
    }
    return f;
}

State build_J(Engine& e, const Frames& f, Sector s, const State& eta)
{
    const auto& low = s == Sector::plus ? f.ep : f.em;
    const auto& up = s == Sector::plus ? f.epd : f.emd;
    State r;
    for (std::size_t a = 0; a < low.size(); ++a) r += e.no(up[a], low[a]);
    r = r.scaled(CoeffExpr(I * Gauss::frac(1, 2)));
    if (!eta.is_zero()) r += e.apply_T(eta).scaled(CoeffExpr(I));
    return r;
}

State build_H(Engine& e, const Frames& f, Sector s)
{
    const auto& low = s == Sector::plus ? f.ep : f.em;
    const auto& up = s == Sector::plus ? f.epd : f.emd;
    State r;
    for (std::size_t a = 0; a < low.size(); ++a) {
        r += e.no(up[a], e.apply_S(low[a]));
        r += e.no(low[a], e.apply_S(up[a]));
    }
    return r.scaled(CoeffExpr(Gauss::frac(1, 2)));
}

NamedFields build_fields(Engine& e, const Frames& f)
{
    return {build_J(e, f, Sector::plus), build_J(e, f, Sector::minus), build_H(e, f, Sector::plus),
            build_H(e, f, Sector::minus)};
}

Br conformal_op(Engine& e, const State& x, long a, long b)
{
    Br r;
    r.add({}, e.apply_T(x).scaled(CoeffExpr(a)));
    r.add(hmono(LAM, 1, 0), x.scaled(CoeffExpr(b)));
    r.add(hmono(LAM, 0, 1), e.apply_S(x));
    return r;
}

State coefficient(const Br& x, std::uint32_t j, std::uint32_t J) { return x.at(hmono(LAM, j, J)); }

namespace {
Br central(std::uint32_t j, std::uint32_t J, const Gauss& c)
{
    return Br::term(hmono(LAM, j, J), State::vac(CoeffExpr(c)));
}
} // namespace

std::vector<Residual> verify_single_n2(Engine& e, const State& J, const State& H, const Gauss& c)
{
    Gauss c3 = c / Gauss(3);
    std::vector<Residual> out;
    out.push_back({"[J_L J] + H + (c/3) lam chi", e.bracket(J, J) + Br::constant(H) + central(1, 1, c3)});
    out.push_back({"[H_L J] - (2T + 2lam + chi S) J", e.bracket(H, J) - conformal_op(e, J, 2, 2)});
    out.push_back({"[H_L H] - (2T + 3lam + chi S) H - (c/3) lam^2 chi",
                   e.bracket(H, H) - conformal_op(e, H, 2, 3) - central(2, 1, c3)});
    return out;
}

std::vector<Residual> verify_n22(Engine& e, const NamedFields& f, const Gauss& c)
{
    Gauss c3 = c / Gauss(3);
    std::vector<Residual> out;
    struct Sec {
        const char* tag;
        const State& J;
        const State& H;
        const State& Jo;
        const State& Ho;
    };
    Sec secs[2] = {{"+", f.Jp, f.Hp, f.Jm, f.Hm}, {"-", f.Jm, f.Hm, f.Jp, f.Hp}};
    for (auto& s : secs) {
        std::string t = s.tag, o = (t == "+") ? "-" : "+";
        out.push_back({"[J" + t + "_L J" + t + "] + H" + t + " + (c/3) lam chi",
                       e.bracket(s.J, s.J) + Br::constant(s.H) + central(1, 1, c3)});
        out.push_back({"[J" + t + "_L J" + o + "]", e.bracket(s.J, s.Jo)});
        out.push_back({"[H" + t + "_L J" + t + "] - (2T + 2lam + chi S) J" + t,
                       e.bracket(s.H, s.J) - conformal_op(e, s.J, 2, 2)});
        out.push_back({"[H" + t + "_L J" + o + "]", e.bracket(s.H, s.Jo)});
        out.push_back({"[H" + t + "_L H" + t + "] - (2T + 3lam + chi S) H" + t + " - (c/3) lam^2 chi",
                       e.bracket(s.H, s.H) - conformal_op(e, s.H, 2, 3) - central(2, 1, c3)});
        out.push_back({"[H" + t + "_L H" + o + "]", e.bracket(s.H, s.Ho)});
    }
    return out;
}

std::string render_letter(const Presentation& p, Letter l)
{
    std::string s = p.gen(letter_gen(l)).name;
    std::uint32_t t = letter_t(l);
    if (t == 1) s = "T(" + s + ")";
    else if (t > 1) s = "T^" + std::to_string(t) + "(" + s + ")";
    if (letter_s(l)) s = "S(" + s + ")";
    return s;
}

std::string render_state(const Presentation& p, const State& st)
{
    if (st.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (auto& [m, c] : st.terms()) {
        std::string ms;
        for (Letter l : m) {
            if (!ms.empty()) ms += " ";
            ms += render_letter(p, l);
        }
        CoeffExpr cc = c;
        bool neg = false;
        if (cc.terms().size() == 1) {
            const Gauss& g = cc.terms().begin()->second;
            if (!g.compound() && ((g.is_real() && sgn(g.re) < 0) || (sgn(g.re) == 0 && sgn(g.im) < 0))) {
                neg = true;
                cc = -cc;
            }
        }
        std::string cs;
        if (ms.empty()) cs = cc.compound() ? "(" + cc.str() + ")" : cc.str();
        else if (cc == CoeffExpr(1)) cs = ms;
        else cs = (cc.compound() ? "(" + cc.str() + ")" : cc.str()) + "*" + ms;
        if (first) out = neg ? "-" + cs : cs;
        else out += neg ? " - " + cs : " + " + cs;
        first = false;
    }
    return out;
}

std::string render_br(const Presentation& p, const Br& b)
{
    return hpoly_str<State>(b, [&](const State& s) { return render_state(p, s); });
}

} // namespace lf
