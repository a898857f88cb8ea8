#include <flatdeform/theta.hpp>

#include <set>

namespace flatdeform {

namespace {

Rational alt_sign(long long i)
{
    return (i & 1) ? Rational(-1) : Rational(1);
}

LaurentPoly lp_one(int arity)
{
    return LaurentPoly::monomial(arity, ExpVec(arity, 0), QSeries::constant(1));
}

} // namespace

LaurentPoly theta_g(const ThetaArg& arg, int qorder)
{
    if (static_cast<int>(arg.exps.size()) != arg.arity)
        throw std::invalid_argument("theta_g: exps/arity mismatch");
    bool nonzero = false;
    for (int e : arg.exps)
        nonzero = nonzero || e != 0;
    if (!nonzero)
        throw std::invalid_argument("theta_g: argument monomial must not be 1");
    if (qorder < 1)
        throw std::invalid_argument("theta_g: qorder must be positive");

    LaurentPoly g(arg.arity, qorder);
    ExpVec key(arg.arity);
    for (long long i = -(qorder + 2); i <= qorder + 2; ++i) {
        long long e = i * (i - 1) / 2;
        if (std::min(e, e + i) >= qorder)
            continue;
        for (int v = 0; v < arg.arity; ++v)
            key[v] = static_cast<int>(i) * arg.exps[v];
        g.add_term(key, QSeries::monomial(alt_sign(i), static_cast<int>(e)));
    }
    return g;
}

LaurentPoly theta_g_product(const ThetaArg& arg, int qorder)
{
    if (qorder < 1)
        throw std::invalid_argument("theta_g_product: qorder must be positive");
    LaurentPoly one = lp_one(arg.arity);
    ExpVec minus(arg.arity);
    for (int v = 0; v < arg.arity; ++v)
        minus[v] = -arg.exps[v];

    LaurentPoly acc = one - LaurentPoly::monomial(arg.arity, arg.exps, QSeries::constant(1));
    for (int i = 1; i < qorder; ++i) {
        QSeries qi = QSeries::monomial(1, i);
        LaurentPoly f = one - LaurentPoly::monomial(arg.arity, ExpVec(arg.arity, 0), qi);
        f *= one - LaurentPoly::monomial(arg.arity, arg.exps, qi);
        f *= one - LaurentPoly::monomial(arg.arity, minus, qi);
        acc = (acc * f).truncated(qorder);
    }
    return acc.truncated(qorder);
}

LaurentPoly f1_series(int qorder)
{
    if (qorder < 1)
        throw std::invalid_argument("f1_series: qorder must be positive");
    LaurentPoly f(2, qorder);
    for (long long i = -(qorder + 2); i <= qorder + 2; ++i) {
        long long e = i * (3 * i - 1) / 2;
        if (e >= qorder)
            continue;
        QSeries c = QSeries::monomial(alt_sign(i), static_cast<int>(e));
        int a = static_cast<int>(3 * i);
        f.add_term({a, 1 - a}, c);
        f.add_term({1 - a, a}, c);
    }
    return f;
}

LaurentPoly fnk_recurrence_numerator(const LaurentPoly& fnk, int k)
{
    int n = fnk.arity();
    int m = n + 1;
    int M = fnk.qceil();
    LaurentPoly num(m, M);
    for (int i = 0; i < m; ++i) {
        ExpVec ge(m, -1);
        ge[i] = k;
        LaurentPoly gi = theta_g({ge, m}, M);
        std::vector<int> slots;
        for (int j = 0; j < m; ++j)
            if (j != i)
                slots.push_back(j);
        num -= gi * fnk.embedded(m, slots);
    }
    return num;
}

LaurentPoly fnk_series(const FnkSpec& spec)
{
    if (spec.n < 1 || spec.k < 1 || spec.n > spec.k + 1)
        throw std::invalid_argument("fnk_series: need 1 <= n <= k+1");
    if (spec.qorder < 1)
        throw std::invalid_argument("fnk_series: qorder must be positive");
    int M = spec.qorder;

    LaurentPoly f = theta_g({{spec.k}, 1}, M)
                        .term_multiplied({1}, QSeries::constant(1))
                        .divided_exact(theta_g({{1}, 1}, M));
    for (int n = 1; n < spec.n; ++n) {
        LaurentPoly num = fnk_recurrence_numerator(f, spec.k);
        f = num.divided_exact(theta_g({ExpVec(n + 1, -1), n + 1}, M));
    }
    return f;
}

CheckReport check_theta_identities(int qorder)
{
    if (qorder < 2)
        throw std::invalid_argument("check_theta_identities: qorder must be >= 2");
    CheckReport rep;
    LaurentPoly g = theta_g({{1}, 1}, qorder);
    LaurentPoly neg_g_over_z = g.term_multiplied({-1}, QSeries::constant(-1));

    rep.items.push_back(
        check_equal("g(1/z) = -g(z)/z", g.substituted(0, 1, 0, {-1}), neg_g_over_z, qorder));
    rep.items.push_back(check_zero("g(1) = 0", g.var_set_to_one(0), qorder));
    rep.items.push_back(
        check_equal("g(qz) = -g(z)/z", g.substituted(0, 1, 1, {1}), neg_g_over_z, qorder));
    rep.items.push_back(check_equal("sum form = product form", g.truncated(qorder),
                                    theta_g_product({{1}, 1}, qorder), qorder));
    return rep;
}

CheckReport check_fpr(int n, int k, int qorder)
{
    LaurentPoly f = fnk_series({n, k, qorder});
    int M = f.qceil();
    ExpVec off(n, k + 1);
    off[0] = 1 - k * k;
    int cq = -(k + 1) * (k - 2) / 2;
    Rational sgn = (k & 1) ? 1 : -1; // (-1)^{k-1}

    /* The two sides are shifted images of the same truncated series, so no
     * uniform q-window covers every monomial; instead each monomial is
     * compared on its own honest window: coefficient of z^m on the left is
     * f_m q^{m_1}, on the right sgn q^{cq} f_{m-off}, each known below the
     * truncation plus its shift. */
    std::set<ExpVec> keys;
    for (const auto& t : f.terms()) {
        keys.insert(t.first);
        ExpVec s = t.first;
        for (int v = 0; v < n; ++v)
            s[v] += off[v];
        keys.insert(s);
    }
    CheckItem it;
    it.name = "shift covariance for f_{" + std::to_string(n) + "," + std::to_string(k) + "}";
    it.pass = true;
    it.certified = std::min(qorder, M);
    for (const auto& m : keys) {
        ExpVec p = m;
        for (int v = 0; v < n; ++v)
            p[v] -= off[v];
        QSeries a = f.coeff(m).shifted(m[0]);
        QSeries b = f.coeff(p).shifted(cq).scaled(sgn);
        auto d = a.first_difference(b);
        if (d) {
            it.pass = false;
            it.offender = PolyDifference{m, *d};
            break;
        }
    }
    CheckReport rep;
    rep.items.push_back(it);
    return rep;
}

CheckReport check_rest1(int k, int qorder)
{
    LaurentPoly f = fnk_series({1, k, qorder});
    QSeries v = poly1_evaluated(f, Rational(1));
    QSeries expect = QSeries::constant(k).truncated(v.hi());
    CheckReport rep;
    CheckItem it;
    it.name = "f_{1," + std::to_string(k) + "}(1) = " + std::to_string(k);
    it.certified = std::min(qorder, v.hi());
    auto d = v.first_difference(expect);
    it.pass = !d || *d >= it.certified;
    if (!it.pass)
        it.offender = PolyDifference{ExpVec{}, *d};
    rep.items.push_back(it);
    return rep;
}

CheckReport check_rest2(int n, int k, int qorder)
{
    LaurentPoly big = fnk_series({n + 1, k, qorder});
    LaurentPoly small = fnk_series({n, k, qorder});
    CheckReport rep;
    rep.items.push_back(check_equal("f_{" + std::to_string(n + 1) + "," + std::to_string(k)
                                        + "}(...,1) = " + std::to_string(k - n) + " f_{"
                                        + std::to_string(n) + "," + std::to_string(k) + "}",
                                    big.var_set_to_one(n), small.scaled(Rational(k - n)),
                                    qorder));
    return rep;
}

CheckReport check_vanishing(int k, int qorder)
{
    LaurentPoly f = fnk_series({k, k, qorder});
    LaurentPoly num = fnk_recurrence_numerator(f, k);
    CheckReport rep;
    rep.items.push_back(check_zero("recurrence numerator vanishes at n = k = "
                                       + std::to_string(k),
                                   num, qorder));
    return rep;
}

LaurentPoly conj51_f(int qorder)
{
    if (qorder < 1)
        throw std::invalid_argument("conj51_f: qorder must be positive");
    LaurentPoly f(1, qorder);
    for (long long i = -(qorder + 2); i <= qorder + 2; ++i) {
        long long e = i * (3 * i + 1) / 2;
        if (e >= qorder)
            continue;
        QSeries c = QSeries::monomial(alt_sign(i), static_cast<int>(e));
        f.add_term({static_cast<int>(6 * i + 1)}, c);
        f.add_term({static_cast<int>(-6 * i - 1)}, c);
    }
    return f;
}

QuadDeformCoeffs conj51_coeffs(const Rational& t, const Rational& qt, int range, int qorder)
{
    if (t == 0)
        throw std::domain_error("conj51_coeffs: t must be nonzero");
    LaurentPoly f = conj51_f(qorder);
    QuadDeformCoeffs out;
    for (int k = -range; k <= range; ++k) {
        long long kk = static_cast<long long>(k) * k;
        out.y1[k] = poly1_evaluated(f, rational_pow(t, 2 * k))
                        .scaled(rational_pow(qt, kk));
        out.y2[k] = poly1_evaluated(f, rational_pow(t, 2 * k + 1))
                        .scaled(rational_pow(qt, kk + k));
    }
    return out;
}

LaurentPoly fermionic_generator(int k, int qorder)
{
    if (k < 2)
        throw std::invalid_argument("fermionic_generator: k must be >= 2");
    ExpVec stair(k);
    for (int a = 0; a < k; ++a)
        stair[a] = a;
    LaurentPoly acc = LaurentPoly::monomial(k, stair, QSeries::constant(1));
    for (int a = 0; a < k; ++a) {
        for (int b = a + 1; b < k; ++b) {
            ExpVec e(k, 0);
            e[a] = 1;
            e[b] = -1;
            acc = (acc * theta_g({e, k}, qorder)).truncated(qorder);
        }
    }
    return acc;
}

} // namespace flatdeform
