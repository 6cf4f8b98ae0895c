#include "lf/coeff.hpp"

#include <mutex>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace lf {

namespace symbols {
namespace {
struct Table {
    std::mutex mu;
    std::unordered_map<std::string, SymId> ids;
    std::vector<std::string> names;
};
Table& table()
{
    static Table t;
    return t;
}
} // namespace

SymId intern(const std::string& n)
{
    auto& t = table();
    std::lock_guard<std::mutex> lk(t.mu);
    auto it = t.ids.find(n);
    if (it != t.ids.end()) return it->second;
    SymId id = SymId(t.names.size());
    t.names.push_back(n);
    t.ids.emplace(n, id);
    return id;
}

const std::string& name(SymId id)
{
    auto& t = table();
    std::lock_guard<std::mutex> lk(t.mu);
    return t.names.at(id);
}

std::optional<SymId> find(const std::string& n)
{
    auto& t = table();
    std::lock_guard<std::mutex> lk(t.mu);
    auto it = t.ids.find(n);
    if (it == t.ids.end()) return std::nullopt;
    return it->second;
}
} // namespace symbols

SymMono mono_mul(const SymMono& a, const SymMono& b)
{
    SymMono r;
    r.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) r.push_back(a[i++]);
        else if (i == a.size() || b[j].first < a[i].first) r.push_back(b[j++]);
        else {
            r.emplace_back(a[i].first, a[i].second + b[j].second);
            ++i;
            ++j;
        }
    }
    return r;
}

std::string mono_str(const SymMono& m)
{
    std::string s;
    for (auto& [id, e] : m) {
        if (!s.empty()) s += "*";
        s += symbols::name(id);
        if (e > 1) s += "^" + std::to_string(e);
    }
    return s;
}

CoeffExpr::CoeffExpr(const Gauss& c)
{
    if (!c.is_zero()) t_.emplace(SymMono{}, c);
}

CoeffExpr CoeffExpr::sym(SymId s, std::uint32_t e)
{
    CoeffExpr r;
    if (e == 0) return CoeffExpr(1);
    r.t_.emplace(SymMono{{s, e}}, Gauss(1));
    return r;
}

Gauss CoeffExpr::const_value() const
{
    if (t_.empty()) return Gauss(0);
    if (!is_const()) throw std::runtime_error("coefficient is not a number: " + str());
    return t_.begin()->second;
}

void CoeffExpr::add_term(const SymMono& m, const Gauss& c)
{
    if (c.is_zero()) return;
    auto it = t_.find(m);
    if (it == t_.end()) {
        t_.emplace(m, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) t_.erase(it);
}

CoeffExpr& CoeffExpr::operator+=(const CoeffExpr& o)
{
    for (auto& [m, c] : o.t_) add_term(m, c);
    return *this;
}

CoeffExpr& CoeffExpr::operator-=(const CoeffExpr& o)
{
    for (auto& [m, c] : o.t_) add_term(m, -c);
    return *this;
}

CoeffExpr& CoeffExpr::operator*=(const Gauss& c)
{
    if (c.is_zero()) {
        t_.clear();
        return *this;
    }
    for (auto& kv : t_) kv.second *= c;
    return *this;
}

CoeffExpr CoeffExpr::operator-() const
{
    CoeffExpr r = *this;
    for (auto& kv : r.t_) kv.second = -kv.second;
    return r;
}

CoeffExpr operator*(const CoeffExpr& a, const CoeffExpr& b)
{
    CoeffExpr r;
    for (auto& [ma, ca] : a.t_)
        for (auto& [mb, cb] : b.t_) r.add_term(mono_mul(ma, mb), ca * cb);
    return r;
}

CoeffExpr CoeffExpr::derive(const std::function<CoeffExpr(SymId)>& d) const
{
    CoeffExpr r;
    for (auto& [m, c] : t_) {
        for (std::size_t k = 0; k < m.size(); ++k) {
            CoeffExpr ds = d(m[k].first);
            if (ds.is_zero()) continue;
            SymMono rest = m;
            if (--rest[k].second == 0) rest.erase(rest.begin() + long(k));
            CoeffExpr part;
            part.add_term(rest, c * Gauss(long(m[k].second)));
            r += part * ds;
        }
    }
    return r;
}

CoeffExpr CoeffExpr::substitute(const std::function<std::optional<CoeffExpr>(SymId)>& f) const
{
    CoeffExpr r;
    for (auto& [m, c] : t_) {
        CoeffExpr term(c);
        SymMono keep;
        for (auto& [id, e] : m) {
            auto v = f(id);
            if (!v) {
                keep.emplace_back(id, e);
                continue;
            }
            for (std::uint32_t k = 0; k < e; ++k) term = term * *v;
        }
        CoeffExpr km;
        km.add_term(keep, Gauss(1));
        r += term * km;
    }
    return r;
}

std::set<SymId> CoeffExpr::symbol_set() const
{
    std::set<SymId> s;
    for (auto& [m, c] : t_)
        for (auto& pr : m) s.insert(pr.first);
    return s;
}

CoeffExpr CoeffExpr::conj() const
{
    CoeffExpr r;
    for (auto& [m, c] : t_) r.t_.emplace(m, c.conj());
    return r;
}

std::uint32_t CoeffExpr::degree_in(SymId s) const
{
    std::uint32_t d = 0;
    for (auto& [m, c] : t_)
        for (auto& pr : m)
            if (pr.first == s) d = std::max(d, pr.second);
    return d;
}

std::string CoeffExpr::str() const
{
    if (t_.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto& [m, c] : t_) {
        std::string cs;
        bool neg = false;
        Gauss cc = c;
        if (!cc.compound()) {
            if ((cc.is_real() && sgn(cc.re) < 0) || (sgn(cc.re) == 0 && sgn(cc.im) < 0)) {
                neg = true;
                cc = -cc;
            }
        }
        if (m.empty()) cs = cc.compound() ? "(" + cc.str() + ")" : cc.str();
        else if (cc.is_one()) cs = mono_str(m);
        else cs = (cc.compound() ? "(" + cc.str() + ")" : cc.str()) + "*" + mono_str(m);
        if (first) out = neg ? "-" + cs : cs;
        else out += neg ? " - " + cs : " + " + cs;
        first = false;
    }
    return out;
}

bool CoeffExpr::compound() const
{
    if (t_.size() > 1) return true;
    if (t_.empty()) return false;
    auto& [m, c] = *t_.begin();
    return c.compound();
}

std::size_t CoeffExpr::hash() const
{
    std::size_t h = 1469598103934665603ull;
    for (auto& [m, c] : t_) {
        for (auto& pr : m) h = (h ^ (pr.first * 131 + pr.second)) * 1099511628211ull;
        h = (h ^ c.hash()) * 1099511628211ull;
    }
    return h;
}

} // namespace lf
