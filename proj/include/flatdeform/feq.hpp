#pragma once

#include <flatdeform/check.hpp>
#include <flatdeform/linalg.hpp>

#include <map>
#include <utility>

namespace flatdeform {

/* coefficients of a candidate relation, indexed by (family index a, offset j);
 * s labels the relation's total degree */
struct RelationVector {
    std::map<std::pair<int, int>, QSeries> entries;
    int s = 0;
};

/* a family of quadratic generators in realized form: f_list[a] is the arity-2
 * generating function with leading exponent shifts[a] */
struct FamilySpec {
    std::vector<int> shifts;
    std::vector<LaurentPoly> f_list;
    int s = 0;
};

struct EmptySystemError : std::runtime_error {
    explicit EmptySystemError(const std::string& what) : std::runtime_error(what) {}
};

/* residual of the quadratic relation equation: for each cyclic slot c of
 * three variables, z_c^{s-k_a} g_a(z_az_b/z_c^2) f_a(z_a,z_b) summed over the
 * family, with g_a(w) expanded entry by entry as w^j */
LaurentPoly fa1_residual(const FamilySpec& fam, const RelationVector& g);
CheckReport check_fa1(const FamilySpec& fam, const RelationVector& g, int qorder);

/* residual of the degree-k relation equation: the (k+1)-term cyclic sum of
 * g(z_c^k / prod_{i != c} z_i) f(..., omitting z_c); b supplies g's
 * coefficients under keys (0, beta) */
LaurentPoly fah1_residual(int k, const LaurentPoly& f, const RelationVector& b);
CheckReport check_fah1(int k, const LaurentPoly& f, const RelationVector& b, int qorder);

/* exact kernel of the relation-space system at a rational q sample */
struct RelationSpace {
    int dimension = 0;
    std::vector<std::map<std::pair<int, int>, Rational>> basis;
    int rows = 0;   // equations kept
    int cols = 0;   // unknowns touched by a kept equation
    int unseen = 0; // in-window unknowns no kept equation touches
};

/* Unknowns v_{a,j} with |j| <= jwindow; equations are the coefficients of
 * three-variable monomials in the quadratic residual, evaluated at q after
 * truncating coefficients at qorder.  Each variable slot pins the offset
 * reaching a given monomial, so an equation is kept only when every one of
 * its potential contributions is exactly known, fully visible below qorder,
 * and in-window; equations the truncation would clip are dropped, and
 * unknowns no surviving equation touches are excised rather than reported
 * as free directions.  Generator coefficients carrying truncated windows
 * therefore yield few or no usable equations by design. */
RelationSpace solve_relation_space(const FamilySpec& fam, int jwindow, const Rational& q,
                                   int qorder);

/* relation-space dimension for undeformed monomial-run generators */
int ds_monomial(const std::vector<int>& shifts, int s, int jwindow = 6);

} // namespace flatdeform
