#include <flatdeform/linalg.hpp>

#include <stdexcept>

namespace flatdeform {

namespace {

std::vector<std::vector<Integer>> cleared(const RatMatrix& m)
{
    std::vector<std::vector<Integer>> a(m.size());
    for (size_t i = 0; i < m.size(); ++i) {
        Integer lcm = 1;
        for (const auto& x : m[i])
            mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.get_den().get_mpz_t());
        a[i].reserve(m[i].size());
        for (const auto& x : m[i]) {
            Rational scaled = x * Rational(lcm);
            a[i].push_back(scaled.get_num());
        }
    }
    return a;
}

int rank_impl(std::vector<std::vector<Integer>> a, bool parallel)
{
    const int rows = static_cast<int>(a.size());
    if (rows == 0)
        return 0;
    const int cols = static_cast<int>(a[0].size());
    Integer prev = 1;
    int rank = 0;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int piv = -1;
        for (int r = rank; r < rows; ++r)
            if (a[r][col] != 0) {
                piv = r;
                break;
            }
        if (piv < 0)
            continue;
        std::swap(a[piv], a[rank]);
#pragma omp parallel for schedule(dynamic) if (parallel)
        for (int i = rank + 1; i < rows; ++i) {
            Integer t;
            for (int j = col + 1; j < cols; ++j) {
                t = a[rank][col] * a[i][j] - a[i][col] * a[rank][j];
                mpz_divexact(a[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            a[i][col] = 0;
        }
        prev = a[rank][col];
        ++rank;
    }
    return rank;
}

} // namespace

int rank_bareiss(const RatMatrix& m)
{
    return rank_impl(cleared(m), true);
}

int rank_bareiss_serial(const RatMatrix& m)
{
    return rank_impl(cleared(m), false);
}

std::vector<std::vector<Rational>> kernel_basis(RatMatrix m, int cols)
{
    for (const auto& row : m)
        if (static_cast<int>(row.size()) != cols)
            throw std::invalid_argument("ragged matrix");
    const int rows = static_cast<int>(m.size());
    std::vector<int> pivot_col;
    int rank = 0;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int piv = -1;
        for (int r = rank; r < rows; ++r)
            if (m[r][col] != 0) {
                piv = r;
                break;
            }
        if (piv < 0)
            continue;
        std::swap(m[piv], m[rank]);
        Rational inv = Rational(1) / m[rank][col];
        for (int j = col; j < cols; ++j)
            m[rank][j] *= inv;
        for (int i = 0; i < rows; ++i) {
            if (i == rank || m[i][col] == 0)
                continue;
            Rational f = m[i][col];
            for (int j = col; j < cols; ++j)
                m[i][j] -= f * m[rank][j];
        }
        pivot_col.push_back(col);
        ++rank;
    }
    std::vector<bool> is_pivot(cols, false);
    for (int c : pivot_col)
        is_pivot[c] = true;
    std::vector<std::vector<Rational>> basis;
    for (int f = 0; f < cols; ++f) {
        if (is_pivot[f])
            continue;
        std::vector<Rational> v(cols, Rational(0));
        v[f] = 1;
        for (int r = 0; r < rank; ++r)
            v[pivot_col[r]] = -m[r][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

} // namespace flatdeform
