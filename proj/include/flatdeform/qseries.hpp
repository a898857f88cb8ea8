#pragma once

#include <flatdeform/rational.hpp>

#include <optional>
#include <vector>

namespace flatdeform {

/* Truncated Laurent series in the deformation parameter q, with exact
 * rational coefficients and an explicit knowledge window.
 *
 *   - every exponent below lo() is known to carry coefficient 0,
 *   - coefficients for [lo(), hi()) are known exactly (stored dense from
 *     lo(), with an implicit known-zero tail up to hi()),
 *   - nothing is claimed from hi() on.
 *
 * A series whose every known coefficient is zero is stored with lo()==hi();
 * the ceiling survives so checks can still report how far the zero is
 * certified.  Exactly-known values (single monomials, plain rationals) use
 * the sentinel ceiling kExactCeiling.  All arithmetic intersects windows:
 * sums are known below min(hi), products below min(lo_a+hi_b, lo_b+hi_a). */
class QSeries {
public:
    static constexpr int kExactCeiling = 1000000000;

    QSeries() : lo_(kExactCeiling), hi_(kExactCeiling) {}

    static QSeries zero(int ceiling);
    static QSeries constant(const Rational& c);
    static QSeries monomial(const Rational& c, int e, int ceiling = kExactCeiling);
    /* coefficients for exponents lo, lo+1, ... with knowledge ceiling `hi` */
    static QSeries dense(int lo, std::vector<Rational> coeffs, int hi);

    int lo() const { return lo_; }
    int hi() const { return hi_; }
    /* exclusive upper end of the stored coefficients (== lo() when zero) */
    int content_hi() const { return lo_ + static_cast<int>(c_.size()); }
    bool is_zero() const { return c_.empty(); }
    bool is_exact() const { return hi_ >= kExactCeiling; }

    /* coefficient of q^e; asking at or above the ceiling is a logic error */
    const Rational& coeff(int e) const;

    QSeries operator-() const;
    QSeries operator+(const QSeries& o) const;
    QSeries operator-(const QSeries& o) const;
    QSeries operator*(const QSeries& o) const;
    QSeries& operator+=(const QSeries& o) { return *this = *this + o; }
    QSeries& operator-=(const QSeries& o) { return *this = *this - o; }
    QSeries& operator*=(const QSeries& o) { return *this = *this * o; }

    QSeries scaled(const Rational& c) const;
    QSeries shifted(int k) const; // multiply by q^k
    QSeries truncated(int ceiling) const;

    bool operator==(const QSeries& o) const
    {
        return lo_ == o.lo_ && hi_ == o.hi_ && c_ == o.c_;
    }

    /* first exponent below min(hi, o.hi) where the two disagree */
    std::optional<int> first_difference(const QSeries& o) const;

    /* Formal quotient *this / d, requiring d's lowest stored coefficient to
     * be nonzero (a unit times q^{d.lo()}).  The result is certified on
     * [lo-d.lo, lo-d.lo + min(len, d.len)) and additionally capped at
     * `order_cap` so quotients of exact series stay finite. */
    QSeries unit_div(const QSeries& d, int order_cap) const;

    /* sum of known coefficients times q0^e (q0 != 0, or no negative terms) */
    Rational evaluate(const Rational& q0) const;

    std::string to_string() const;

private:
    int lo_;
    int hi_;
    std::vector<Rational> c_;

    void normalize();
    static int clamp_ceiling(long long h)
    {
        return h >= kExactCeiling ? kExactCeiling : static_cast<int>(h);
    }
};

} // namespace flatdeform
