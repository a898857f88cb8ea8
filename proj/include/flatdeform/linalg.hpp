#pragma once

#include <flatdeform/rational.hpp>

#include <vector>

namespace flatdeform {

using RatMatrix = std::vector<std::vector<Rational>>;

/* Exact rank by fraction-free elimination: denominators cleared per row,
 * then Bareiss pivoting over the integers.  rank_bareiss parallelizes the
 * row updates; rank_bareiss_serial is the reference implementation the
 * tests and the benchmark compare it against. */
int rank_bareiss(const RatMatrix& m);
int rank_bareiss_serial(const RatMatrix& m);

/* basis of { v : m v = 0 } via Gauss-Jordan; `cols` names the column count
 * so empty systems still know their ambient dimension */
std::vector<std::vector<Rational>> kernel_basis(RatMatrix m, int cols);

} // namespace flatdeform
