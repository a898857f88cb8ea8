#pragma once

#include <flatdeform/funcreal.hpp>
#include <flatdeform/linalg.hpp>

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace flatdeform {

/* polynomial (or exterior) algebra truncated to the generators x_{-N}..x_N */
struct CutoffAlgebra {
    Kind kind = Kind::bosonic;
    int N = 1;
};

/* graded slice: index degree n, word weight l */
struct GradedKey {
    int n = 0;
    int l = 0;
    auto operator<=>(const GradedKey&) const = default;
};

/* one summand of a generator: coeff * x_{i+offsets[0]} ... x_{i+offsets[d-1]} */
struct IdealTerm {
    QSeries coeff;
    std::vector<int> offsets; // ascending, length = family degree
};

/* Translation-covariant generator family g_i.  terms(i) lists the summands of
 * g_i; the row indexing of ideal_component requires the index degree to obey
 * deg(g_i) = deg_step*i + deg_base.  qwindow is the largest truncation order
 * the stored coefficients are complete for; `truncated` marks families whose
 * coefficients are series cut at construction time, so verdicts about them
 * only hold at that order.  run_length names the monomial reference family
 * when there is one (0 otherwise); margin sets the interior window used by
 * flatness_report; kind, when present, restricts the host algebra. */
struct IdealFamily {
    std::string name;
    int degree = 1;
    std::function<std::vector<IdealTerm>(int)> terms;
    std::map<std::string, Rational> parameters;
    std::optional<Kind> kind;
    int deg_step = 1;
    int deg_base = 0;
    int qwindow = QSeries::kExactCeiling;
    bool truncated = false;
    int run_length = 0;
    int margin = 2;
};

struct GradedDims {
    int ambient = 0;
    int rank = 0;
    int quotient = 0;
};

enum class Verdict { flat, deficient, excess };

/* Per-slice flatness data: reference is the quotient dimension at q = 0,
 * enumerated the run-avoidance count (-1 without a monomial reference),
 * rank[s]/quotient[s] the exact dimensions at q_samples[s].
 *
 * For truncated families the sampled dimensions are tainted by the unknown
 * coefficient tails (an O(q^M) defect in a dependency raises the sampled
 * rank), so the verdict instead comes from window_rank: the rank of the
 * series matrix computed by valuation-pivoted elimination, where a row whose
 * entries all vanish within their certified windows counts as zero.
 * `certified` reports how far that zeroness is certified (the smallest
 * window ceiling consulted; qorder when no row was discarded).  Exact
 * families keep the sampled verdict and leave these fields at -1. */
struct KeyDims {
    GradedKey key;
    int ambient = 0;
    int reference = 0;
    int enumerated = -1;
    std::vector<int> rank;
    std::vector<int> quotient;
    int window_rank = -1;
    int window_quotient = -1;
    int certified = -1;
    Verdict verdict = Verdict::flat;
};

struct DimReport {
    Kind kind = Kind::bosonic;
    int N = 0;
    int l_max = 0;
    int qorder = 0;
    int margin = 0;
    int truncation = 0; // nonzero: verdicts hold at this truncation order only
    std::pair<int, int> n_range{0, 0};
    std::vector<Rational> q_samples;
    std::vector<KeyDims> keys;

    bool all_flat() const;
};

struct UnknownFamily : std::runtime_error {
    explicit UnknownFamily(const std::string& name)
        : std::runtime_error("unknown ideal family: " + name)
    {
    }
};

/* a sampled quotient exceeded the q = 0 reference, which no specialization
 * of a deformation family can do; always an input or implementation defect */
struct SemicontinuityViolation : std::runtime_error {
    GradedKey key;
    Rational q;
    SemicontinuityViolation(const GradedKey& k, const Rational& q0);
};

/* all basis monomials of the slice, ascending; empty when unrealizable */
std::vector<Monomial> enumerate_monomials(const CutoffAlgebra& alg, const GradedKey& key);

/* count of slice monomials whose index support contains no run_length
 * consecutive integers (run_length >= 2) */
int enumerate_quotient_basis(const CutoffAlgebra& alg, int run_length,
                             const GradedKey& key);

/* The weight-l slice of the ideal as an exact matrix.  Columns follow
 * enumerate_monomials(key); rows ascend by cofactor monomial m of weight
 * l - degree, one per m whose index degree admits a generator.  Summands
 * leaving [-N, N] are dropped (the cutoff quotient), fermionic products
 * reorder with signs, coefficients are truncated at qorder and evaluated at
 * q, and all-zero rows are discarded so the q = 0 slice of a deformation
 * coincides with its monomial reference matrix row for row. */
RatMatrix ideal_component(const CutoffAlgebra& alg, const IdealFamily& fam,
                          const GradedKey& key, const Rational& q, int qorder);

GradedDims graded_dim(const CutoffAlgebra& alg, const IdealFamily& fam,
                      const GradedKey& key, const Rational& q, int qorder);

/* Same slice as ideal_component but before specialization: entries are the
 * accumulated coefficient series with their knowledge windows (exact
 * coefficients keep the exact ceiling, series ones are cut at qorder).
 * Zero-content rows are kept — their windows certify how far they vanish. */
std::vector<std::vector<QSeries>> ideal_component_series(const CutoffAlgebra& alg,
                                                         const IdealFamily& fam,
                                                         const GradedKey& key,
                                                         int qorder);

/* Rank of a window-certified series matrix by Gaussian elimination with
 * minimal-valuation pivoting.  Returns {rank, certified}: rows left over at
 * the end have no nonzero known coefficient, and `certified` is the smallest
 * knowledge ceiling among their entries — the order below which the rank
 * claim is exact (kExactCeiling when every row became a pivot). */
std::pair<int, int> series_rank(std::vector<std::vector<QSeries>> rows);

/* Flatness sweep over the interior slices |n| <= (N - margin) * l clipped to
 * n_range, weights 1..l_max; slices are independent and run in parallel.
 * Truncated families take their verdicts from the series-window rank (see
 * KeyDims); exact families from the sampled dimensions.  Throws
 * SemicontinuityViolation when a sampled quotient exceeds the q = 0
 * reference. */
DimReport flatness_report(const CutoffAlgebra& alg, const IdealFamily& fam, int l_max,
                          std::pair<int, int> n_range,
                          const std::vector<Rational>& q_samples, int qorder);

const std::vector<Rational>& default_q_samples();

/* catalogue of generator families:
 *   monomial-run   w                    x_i x_{i+1} ... x_{i+w-1}
 *   theta-k1                            quadratic theta tail, offsets (3a, 1-3a)
 *   theta-fkk      k, qorder            degree-k recurrence solution family
 *   fermi-theta                         alternating quadratic fermionic tail
 *   fermi-fkk      k, qorder            staircase fermionic family
 *   conj51         t, qt, qorder, range two interleaved quadratic families
 * Series-backed families require qorder and carry truncated coefficients;
 * conj51's range caps the summand spread and should be at least N. */
IdealFamily builtin_family(const std::string& name,
                           const std::map<std::string, Rational>& parameters = {});

} // namespace flatdeform
