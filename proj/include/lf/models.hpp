#pragma once

#include "lf/engine.hpp"

#include <string>
#include <vector>

namespace lf {

// B[a], Bb[a] even weight 0; Psi[a], Psib[a] odd weight 1/2; [Psi_i Λ B^i] = 1.
Presentation free_sigma_model(int n);

// Frame generators ep[a] = e_a^+, epd[a] = e^a_+, em[a], emd[a] over flat frames:
// [e_a^± Λ e^b_±] = 2χδ, all other generator brackets zero. Each name in
// `functions` becomes a function symbol; anchors are generated lazily.
Presentation uch_patch_flat(int n, const std::vector<std::string>& functions = {});

// The adapted frames as states of some presentation.
struct Frames {
    std::vector<State> ep, epd, em, emd;
    int n() const { return int(ep.size()); }
};

// e_a^± = Psi[a] ± S Bb[a], e^a_± = S B[a] ± Psib[a] (flat metric, identity g)
Frames free_frames(Engine& e);
Frames uch_frames(Engine& e);

enum class Sector { plus, minus };

// J^± = (i/2) Σ e^a_± e_a^± + i T(eta)
State build_J(Engine& e, const Frames& f, Sector s, const State& eta = State());
// flat H^± = ½ Σ (e^a_± S e_a^± + e_a^± S e^a_±) − i T 𝒥_± 𝒟 eta
State build_H(Engine& e, const Frames& f, Sector s);

struct NamedFields {
    State Jp, Jm, Hp, Hm;
};
NamedFields build_fields(Engine& e, const Frames& f);

// (aT + bλ + χS) X
Br conformal_op(Engine& e, const State& x, long a, long b);

struct Residual {
    std::string name;
    Br value;
    bool ok() const { return value.is_zero(); }
};

// six families of the N=2,2 relations with central charge c
std::vector<Residual> verify_n22(Engine& e, const NamedFields& f, const Gauss& c);
// one N=2 pair
std::vector<Residual> verify_single_n2(Engine& e, const State& J, const State& H, const Gauss& c);

// coefficient of λ^j χ^J in X, as a state
State coefficient(const Br& x, std::uint32_t j, std::uint32_t J);

std::string render_state(const Presentation& p, const State& s);
std::string render_br(const Presentation& p, const Br& b);
std::string render_letter(const Presentation& p, Letter l);

} // namespace lf
