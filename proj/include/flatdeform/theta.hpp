#pragma once

#include <flatdeform/check.hpp>

#include <map>

namespace flatdeform {

/* a Laurent monomial w = z^exps fed to the theta series g */
struct ThetaArg {
    ExpVec exps;
    int arity;
};

/* g(w) = sum_i (-1)^i w^i q^{i(i-1)/2} with absent terms certified zero
 * below qorder.  Terms are stored with exact windows; the stored range also
 * covers every i whose exponent a unit q-shift could pull below qorder, so
 * substitutions z -> q^{+-1} z stay sound. */
LaurentPoly theta_g(const ThetaArg& arg, int qorder);

/* (1-w) prod_{i>=1} (1-q^i)(1-q^i w)(1-q^i w^{-1}), factors i < qorder */
LaurentPoly theta_g_product(const ThetaArg& arg, int qorder);

/* quadratic-case deformation series:
 * sum_i (-1)^i q^{i(3i-1)/2} (z1^{3i} z2^{1-3i} + z1^{1-3i} z2^{3i}) */
LaurentPoly f1_series(int qorder);

struct FnkSpec {
    int n;
    int k;
    int qorder;
};

/* n-variable family: base f_{1,k} = z g(z^k)/g(z), then the recurrence
 * f_{n+1,k} = -sum_i g(z_i^k prod_{j!=i} z_j^{-1}) f_{n,k}(.. without z_i ..)
 *             / g((z_1...z_{n+1})^{-1}) */
LaurentPoly fnk_series(const FnkSpec& spec);

/* numerator of the recurrence step that would build f_{n+1,k}; exposed so
 * the vanishing check (n = k) can inspect it before division */
LaurentPoly fnk_recurrence_numerator(const LaurentPoly& fnk, int k);

/* g(1/z) = -g(z)/z, g(1) = 0, g(qz) = -g(z)/z, sum form = product form */
CheckReport check_theta_identities(int qorder);

/* f_{n,k}(q z1, z2,...) = (-1)^{k-1} q^{-(k+1)(k-2)/2} z1^{1-k^2} (z2...zn)^{k+1} f_{n,k}
 * Both sides shear the q-window per monomial, so the comparison runs key by
 * key on each monomial's own window; `certified` reports the truncation
 * order exercised rather than a uniform q-window across monomials. */
CheckReport check_fpr(int n, int k, int qorder);

/* f_{1,k}(1) = k */
CheckReport check_rest1(int k, int qorder);

/* f_{n+1,k}(z1,...,zn,1) = (k-n) f_{n,k}(z1,...,zn) */
CheckReport check_rest2(int n, int k, int qorder);

/* the recurrence numerator at n = k vanishes identically (f_{k+1,k} = 0) */
CheckReport check_vanishing(int k, int qorder);

/* sum_i (-1)^i (t^{6i+1} + t^{-6i-1}) q^{i(3i+1)/2} */
LaurentPoly conj51_f(int qorder);

/* coefficient sequences of the two deformed quadratic families at exact
 * parameter values: y1[k] = f(t^{2k}) qt^{k^2}, y2[k] = f(t^{2k+1}) qt^{k^2+k} */
struct QuadDeformCoeffs {
    std::map<int, QSeries> y1;
    std::map<int, QSeries> y2;
};
QuadDeformCoeffs conj51_coeffs(const Rational& t, const Rational& qt, int range, int qorder);

/* staircase monomial z2 z3^2 ... zk^{k-1} times prod_{a<b} g(z_a/z_b) */
LaurentPoly fermionic_generator(int k, int qorder);

} // namespace flatdeform
