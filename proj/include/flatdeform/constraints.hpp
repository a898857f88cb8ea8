#pragma once

#include <flatdeform/funcreal.hpp>
#include <flatdeform/qseries.hpp>

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace flatdeform {

/* Polynomial in the deformation coefficients a_1..a_W with rational
 * coefficients, truncated at total degree adegCap.  Keys are dense exponent
 * vectors of length W; zero coefficients are never stored. */
struct APoly {
    int W = 0;
    int adegCap = 0;
    std::map<std::vector<int>, Rational> terms;

    bool is_zero() const { return terms.empty(); }

    /* smallest / largest total degree present; -1 when zero */
    int min_adeg() const;
    int max_adeg() const;

    APoly& operator+=(const APoly& o);
    APoly& operator-=(const APoly& o);
    APoly operator-(const APoly& o) const;

    /* multiply by -a_m (one substitution step); terms pushed past adegCap
     * are discarded */
    APoly times_minus_a(int m) const;

    /* substitute series values for the a_j; indices absent from vals are
     * exactly zero */
    QSeries evaluate(const std::map<int, QSeries>& vals) const;

    bool operator==(const APoly&) const = default;

    std::string to_string() const;
};

/* result of eliminating every adjacent product from the probe monomial:
 * basis monomial -> accumulated coefficient polynomial */
struct ReducedExpansion {
    int W = 0;
    int adegCap = 0;
    std::map<Monomial, APoly> terms;
};

/* a substitution walked outside the configured index window */
struct WindowEscape : std::runtime_error {
    explicit WindowEscape(const std::string& what) : std::runtime_error(what) {}
};

/* one flatness condition: the two elimination orders must assign the same
 * coefficient to `key`, so `residual` has to vanish */
struct Constraint {
    Monomial key;
    APoly residual;
};

/* Expand x_i x_{i+1} x_{i+2} into gap-separated basis monomials two ways:
 * first component always rewrites the leftmost adjacent pair, second always
 * the rightmost.  Both use the substitution
 *   x_j x_{j+1} -> -sum_{m=1..W} a_m x_{j-m} x_{j+1+m},
 * discard terms past adegCap, and throw WindowEscape if an index leaves
 * [indexWindow.first, indexWindow.second]. */
std::pair<ReducedExpansion, ReducedExpansion>
reduce_two_ways(int i, int W, int adegCap, std::pair<int, int> indexWindow);

/* nonzero per-monomial differences of the two expansions at probe i = 0,
 * ordered by basis monomial */
std::vector<Constraint> derive_constraints(int W, int adegCap,
                                           std::pair<int, int> indexWindow);

/* coefficient family a_j(q) read off the quadratic theta relation; support
 * is j in {2,3,5,6,8,...}, exact monomials */
std::map<int, QSeries> theta_candidate(int W);

struct CandidateCheck {
    Monomial key;
    bool pass = false;
    /* q-order through which the residual is known to vanish; on failure the
     * valuation of the first surviving term */
    int vanishes_to = 0;
};

struct CandidateReport {
    int qorder = 0;
    std::vector<CandidateCheck> items;
    bool all_pass() const;
};

/* evaluate every constraint at the candidate and demand vanishing through
 * qorder on a certified window */
CandidateReport check_candidate(const std::map<int, QSeries>& candidate,
                                const std::vector<Constraint>& constraints,
                                int qorder);

} // namespace flatdeform
