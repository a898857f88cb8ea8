#pragma once

#include <flatdeform/algebra.hpp>

#include <cstdint>
#include <map>

namespace flatdeform {

/* Monomial in the commuting generators x_i together with auxiliary run
 * markers ybar_i, where ybar_i stands for the product x_i x_{i+1} ... x_{i+k}.
 * Exponent maps never store zeros. */
struct XYMonomial {
    std::map<int, int> xfactors; // index -> exponent > 0
    std::map<int, int> yfactors;
    int k = 1;

    int xweight() const;
    int yweight() const; // number of marker factors, with multiplicity
    /* grade of the expanded image: weight counts every x, markers as k+1 */
    int weight() const { return xweight() + (k + 1) * yweight(); }
    int degree() const;
    /* exponent-weighted sum of marker indices; the measure each marker
     * shift strictly decreases */
    long long yindex_sum() const;
    bool valid() const;
    std::string to_string() const;

    auto operator<=>(const XYMonomial&) const = default;
};

/* R1 contracts the run x_i ... x_{i+k} to ybar_i; R2 shifts x_i ybar_{i+1}
 * to x_{i+k+1} ybar_i */
enum class Rule { R1, R2 };

struct ReductionStep {
    Rule rule = Rule::R1;
    int position = 0;

    auto operator<=>(const ReductionStep&) const = default;
};

/* expand every marker to its run; exponents accumulate */
Monomial phi(const XYMonomial& m);

/* every step applicable to m: R1 entries by ascending position, then R2
 * entries by ascending position */
std::vector<ReductionStep> applicable_steps(const XYMonomial& m);

/* no run fully present and no marker directly above a generator */
bool is_reduced(const XYMonomial& m);

/* one rewrite; throws std::invalid_argument when the step does not apply */
XYMonomial apply_step(const XYMonomial& m, const ReductionStep& s);

/* Step-selection orders.  Each run of R1 lowers the x-weight and each R2
 * keeps it while lowering yindex_sum, so every strategy terminates; they
 * must all land on the same reduced monomial. */
enum class Strategy { leftmost_r1, leftmost_r2, rightmost, alternating, seeded };

XYMonomial normal_form(XYMonomial m, Strategy strategy = Strategy::leftmost_r1,
                       uint64_t seed = 0);

struct ConfluenceReport {
    int k = 1;
    long long sampled = 0;    // random monomials checked
    long long exhaustive = 0; // small-window monomials checked
    long long steps = 0;      // rewrite steps taken while checking
    bool pass = false;
};

/* Normal forms under all five strategies must coincide, the expanded image
 * must survive every single step, and the termination measures must move the
 * right way, over `samples` random monomials of weight <= max_weight with
 * indices inside index_window — plus every monomial of weight <= 4 on the
 * window [-4, 4], where additionally no two distinct reduced monomials may
 * share an expanded image.  Samples run in parallel, split by seed.  Throws
 * CheckFailed naming the offending monomial and its divergent forms. */
ConfluenceReport confluence_test(int k, long long samples, uint64_t seed,
                                 int max_weight, std::pair<int, int> index_window);

/* Number of reduced monomials of the given grade whose x-indices and marker
 * runs all fit inside [-N, N]; requireY keeps only those with a marker.
 * Expansion identifies them with the slice basis (requireY = false) and with
 * the run-divisible monomials (requireY = true). */
int count_reduced(int k, int N, const GradedKey& key, bool requireY);

} // namespace flatdeform
