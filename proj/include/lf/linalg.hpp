#pragma once

#include "lf/gauss.hpp"

#include <cstddef>
#include <vector>

namespace lf {

using DVec = std::vector<Gauss>;
using DMat = std::vector<DVec>; // row-major

// reduced row echelon form in place; returns pivot columns
std::vector<std::size_t> rref(DMat& a);
std::size_t rank(DMat a);
// basis of {x : A x = 0}; `cols` is needed when A has no rows
std::vector<DVec> nullspace(DMat a, std::size_t cols);

} // namespace lf
