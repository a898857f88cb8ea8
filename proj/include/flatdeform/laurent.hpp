#pragma once

#include <flatdeform/qseries.hpp>

#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace flatdeform {

/* exponent vector of a Laurent monomial z1^e1 ... zn^en */
using ExpVec = std::vector<int>;

inline int total_degree(const ExpVec& e)
{
    int d = 0;
    for (int x : e)
        d += x;
    return d;
}

struct NotDivisibleError : std::runtime_error {
    explicit NotDivisibleError(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidDivisorError : std::runtime_error {
    explicit InvalidDivisorError(const std::string& what) : std::runtime_error(what) {}
};

/* Result of asking "is this polynomial zero?" under truncation: the claim
 * is certified only below `certified`; `witness` is the first offending
 * (monomial, q-exponent) when the answer is no. */
struct ZeroCertificate {
    bool zero = true;
    int certified = 0;
    std::optional<std::pair<ExpVec, int>> witness;
};

struct PolyDifference {
    ExpVec exps;
    int qexp;
};

/* Sparse Laurent polynomial in a fixed number of z-variables whose
 * coefficients are truncated q-series.  Besides per-term windows the poly
 * carries qceil(): the ceiling up to which *absent* monomials are known to
 * have zero coefficient.  Stored terms are never the zero series; when an
 * operation produces a zero coefficient its ceiling is folded into qceil()
 * so no knowledge claim is ever widened. */
class LaurentPoly {
public:
    LaurentPoly() = default;
    explicit LaurentPoly(int arity, int qceil = QSeries::kExactCeiling)
        : arity_(arity), qceil_(qceil)
    {
    }

    /* single term with the coefficient's own window, absent monomials
     * certified zero below qceil (the term's window may exceed qceil) */
    static LaurentPoly monomial(int arity, const ExpVec& e, const QSeries& c,
                                int qceil = QSeries::kExactCeiling);

    /* raw constructor path for series generators: accumulate c into the
     * coefficient of z^e without intersecting windows against qceil().
     * Ring operators (+, *) intersect windows; building a generator through
     * them would truncate guard terms stored beyond qceil(). */
    void add_term(const ExpVec& e, const QSeries& c) { insert_add(e, c); }

    int arity() const { return arity_; }
    int qceil() const { return qceil_; }
    bool empty() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }
    const std::map<ExpVec, QSeries>& terms() const { return terms_; }

    /* coefficient of z^e (absent: zero known below qceil()) */
    QSeries coeff(const ExpVec& e) const;

    /* min over stored coefficients of their valuation (qceil() if none) */
    int qval() const;
    /* min over stored coefficients of their ceiling, and qceil() */
    int min_window() const;

    LaurentPoly operator-() const;
    LaurentPoly operator+(const LaurentPoly& o) const;
    LaurentPoly operator-(const LaurentPoly& o) const;
    /* general product; windows clamped to the tightest valid combination */
    LaurentPoly operator*(const LaurentPoly& o) const;
    LaurentPoly& operator+=(const LaurentPoly& o) { return *this = *this + o; }
    LaurentPoly& operator-=(const LaurentPoly& o) { return *this = *this - o; }
    LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }

    /* multiply by a single term c*z^e keeping exact per-term windows */
    LaurentPoly term_multiplied(const ExpVec& e, const QSeries& c) const;
    LaurentPoly scaled(const QSeries& c) const { return term_multiplied(ExpVec(arity_, 0), c); }
    LaurentPoly scaled(const Rational& c) const { return scaled(QSeries::constant(c)); }

    LaurentPoly truncated(int qceil) const;

    /* z_var <- sign * q^qshift * z^exps  (exps in this poly's arity).
     * Requires exps[var] != 0 or qshift == 0. */
    LaurentPoly substituted(int var, int sign, int qshift, const ExpVec& exps) const;

    /* set z_var = 1 and drop the variable (result arity is arity()-1) */
    LaurentPoly var_set_to_one(int var) const;

    /* re-index variables into a wider poly: variable i becomes slots[i] */
    LaurentPoly embedded(int new_arity, const std::vector<int>& slots) const;

    /* sum over all coordinate permutations, optionally with sign(sigma) */
    LaurentPoly symmetrized(bool with_sign) const;

    /* exact division; throws NotDivisibleError / InvalidDivisorError.
     * The divisor's lowest q-order part must be c*(1 - w) for a single
     * Laurent monomial w != 1.  Terms whose total z-degree falls below
     * `floor` abort the division (default: numerator min degree - 64). */
    LaurentPoly divided_exact(const LaurentPoly& den,
                              std::optional<int> floor = std::nullopt) const;

    /* specialize q: coefficients truncated at qorder, then evaluated */
    std::map<ExpVec, Rational> evaluated_at_q(const Rational& q0, int qorder) const;

    ZeroCertificate zero_certificate(int request) const;
    std::optional<PolyDifference> first_difference(const LaurentPoly& o) const;
    /* min over the union support of the common coefficient windows */
    int certified_common_window(const LaurentPoly& o) const;

    bool operator==(const LaurentPoly& o) const
    {
        return arity_ == o.arity_ && qceil_ == o.qceil_ && terms_ == o.terms_;
    }

    int min_total_degree() const;
    int max_total_degree() const;

    std::string to_string() const;

private:
    int arity_ = 0;
    int qceil_ = QSeries::kExactCeiling;
    std::map<ExpVec, QSeries> terms_;

    void insert_add(const ExpVec& e, const QSeries& c);
    void check_arity(const LaurentPoly& o) const;
};

/* evaluate a one-variable poly at an exact rational point */
QSeries poly1_evaluated(const LaurentPoly& p, const Rational& z0);

} // namespace flatdeform
