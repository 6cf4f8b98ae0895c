#include "lf/hpoly.hpp"

namespace lf {

LambdaVar LambdaVar::fresh()
{
    static std::atomic<std::uint32_t> next{16};
    return LambdaVar{next++};
}

std::string even_name(LambdaVar v)
{
    switch (v.id) {
    case 0: return "lam";
    case 1: return "gam";
    case 2: return "del";
    default: return "lam" + std::to_string(v.id);
    }
}

std::string odd_name(LambdaVar v)
{
    switch (v.id) {
    case 0: return "chi";
    case 1: return "eta";
    case 2: return "zeta";
    default: return "chi" + std::to_string(v.id);
    }
}

int odd_degree(const HMono& m)
{
    int d = 0;
    for (auto& vp : m) d += int(vp.J);
    return d;
}

std::uint32_t even_power(const HMono& m, LambdaVar v)
{
    for (auto& vp : m)
        if (vp.var == v.id) return vp.j;
    return 0;
}

std::uint32_t odd_power(const HMono& m, LambdaVar v)
{
    for (auto& vp : m)
        if (vp.var == v.id) return vp.J;
    return 0;
}

HMono hmono(LambdaVar v, std::uint32_t j, std::uint32_t J)
{
    if (j == 0 && J == 0) return {};
    return {VarPow{v.id, j, J}};
}

HMono hmono_mul(const HMono& a, const HMono& b, int& sign)
{
    // inversions between odd parts of a and b
    int inv = 0;
    for (auto& x : a) {
        if (!x.J) continue;
        for (auto& y : b)
            if (y.J && y.var < x.var) ++inv;
    }
    if (inv & 1) sign = -sign;
    HMono r;
    std::size_t i = 0, k = 0;
    while (i < a.size() || k < b.size()) {
        if (k == b.size() || (i < a.size() && a[i].var < b[k].var)) r.push_back(a[i++]);
        else if (i == a.size() || b[k].var < a[i].var) r.push_back(b[k++]);
        else {
            VarPow v{a[i].var, a[i].j + b[k].j, a[i].J + b[k].J};
            if (v.J == 2) {
                // χ·χ = −λ
                v.J = 0;
                v.j += 1;
                sign = -sign;
            }
            r.push_back(v);
            ++i;
            ++k;
        }
    }
    return r;
}

std::string hmono_str(const HMono& m)
{
    std::string s;
    for (auto& vp : m) {
        LambdaVar v{vp.var};
        if (vp.j) {
            if (!s.empty()) s += "*";
            s += even_name(v);
            if (vp.j > 1) s += "^" + std::to_string(vp.j);
        }
    }
    for (auto& vp : m)
        if (vp.J) {
            if (!s.empty()) s += "*";
            s += odd_name(LambdaVar{vp.var});
        }
    return s;
}

} // namespace lf
