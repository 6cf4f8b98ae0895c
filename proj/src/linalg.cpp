#include "lf/linalg.hpp"

namespace lf {

std::vector<std::size_t> rref(DMat& a)
{
    std::vector<std::size_t> piv;
    if (a.empty()) return piv;
    std::size_t rows = a.size(), cols = a[0].size(), r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && a[p][c].is_zero()) ++p;
        if (p == rows) continue;
        std::swap(a[p], a[r]);
        Gauss inv = Gauss(1) / a[r][c];
        for (std::size_t k = c; k < cols; ++k)
            if (!a[r][k].is_zero()) a[r][k] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c].is_zero()) continue;
            Gauss f = a[i][c];
            for (std::size_t k = c; k < cols; ++k)
                if (!a[r][k].is_zero()) a[i][k] -= f * a[r][k];
        }
        piv.push_back(c);
        ++r;
    }
    return piv;
}

std::size_t rank(DMat a) { return rref(a).size(); }

std::vector<DVec> nullspace(DMat a, std::size_t cols)
{
    std::vector<std::size_t> piv = rref(a);
    std::vector<bool> is_piv(cols, false);
    for (auto c : piv) is_piv[c] = true;
    std::vector<DVec> out;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_piv[f]) continue;
        DVec x(cols);
        x[f] = Gauss(1);
        for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = -a[r][f];
        out.push_back(std::move(x));
    }
    return out;
}

} // namespace lf
