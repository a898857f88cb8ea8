#pragma once

#include <flatdeform/laurent.hpp>

#include <map>
#include <utility>

namespace flatdeform {

enum class Kind { bosonic, fermionic };

/* basis monomial x_{i1}^{a1} ... x_{im}^{am}, indices strictly increasing */
struct Monomial {
    std::vector<std::pair<int, int>> factors; // (index, exponent >= 1)

    int weight() const
    {
        int w = 0;
        for (const auto& f : factors)
            w += f.second;
        return w;
    }
    int degree() const
    {
        int d = 0;
        for (const auto& f : factors)
            d += f.first * f.second;
        return d;
    }
    /* index list with each index repeated by its exponent */
    std::vector<int> expanded() const;
    bool valid() const;

    auto operator<=>(const Monomial&) const = default;

    std::string to_string() const;
};

struct NotSymmetricError : std::runtime_error {
    explicit NotSymmetricError(const std::string& what) : std::runtime_error(what) {}
};

struct NotAntisymmetricError : std::runtime_error {
    explicit NotAntisymmetricError(const std::string& what) : std::runtime_error(what) {}
};

/* Homogeneous bigraded element: a q-series combination of monomials that all
 * share total degree n and weight l.  Mirrors LaurentPoly's window model:
 * qceil() is the ceiling up to which absent monomials are known zero, and a
 * squared generator on the fermionic side is the zero element. */
class AlgebraElement {
public:
    AlgebraElement() = default;
    AlgebraElement(Kind kind, int n, int l, int qceil = QSeries::kExactCeiling)
        : kind_(kind), n_(n), l_(l), qceil_(qceil)
    {
    }

    Kind kind() const { return kind_; }
    int n() const { return n_; }
    int l() const { return l_; }
    int qceil() const { return qceil_; }
    bool empty() const { return terms_.empty(); }
    const std::map<Monomial, QSeries>& terms() const { return terms_; }

    QSeries coeff(const Monomial& m) const;
    int qval() const;

    /* accumulate c on m; rejects monomials off this element's grade */
    void add_term(const Monomial& m, const QSeries& c);

    AlgebraElement operator*(const AlgebraElement& o) const;
    AlgebraElement scaled(const QSeries& c) const;

    /* shift every generator index by s (degree moves by s*l) */
    AlgebraElement index_shifted(int s) const;

    bool operator==(const AlgebraElement& o) const
    {
        return kind_ == o.kind_ && n_ == o.n_ && l_ == o.l_ && qceil_ == o.qceil_
            && terms_ == o.terms_;
    }

    std::string to_string() const;

private:
    Kind kind_ = Kind::bosonic;
    int n_ = 0;
    int l_ = 0;
    int qceil_ = QSeries::kExactCeiling;
    std::map<Monomial, QSeries> terms_;
};

/* realization as a Laurent polynomial in l variables: sum over all slot
 * permutations of the expanded index list, signed on the fermionic side */
LaurentPoly psi(const AlgebraElement& e);

/* left inverse of psi: coefficients read off ascending-exponent keys divided
 * by the stabilizer order, then verified by realizing the result back.
 * Throws NotSymmetricError / NotAntisymmetricError when p is not in the
 * image, and std::invalid_argument when p mixes total z-degrees. */
AlgebraElement psi_inverse(const LaurentPoly& p, Kind kind);

/* product in realized form: sum over order-preserving interleavings of the
 * two variable sets, signed by the interleaving on the fermionic side */
LaurentPoly product_fr1(const LaurentPoly& f, const LaurentPoly& g, Kind kind);

/* arity-2 generating functions z1^{k_a} + z2^{k_a}
 *   + sum_j u[{a,j}] (z1^{-j} z2^{k_a+j} + z1^{k_a+j} z2^{-j}), j >= 1 */
std::vector<LaurentPoly> generator_genfun(const std::map<std::pair<int, int>, QSeries>& u,
                                          const std::vector<int>& shifts);

} // namespace flatdeform
