#include <flatdeform/feq.hpp>
#include <flatdeform/funcreal.hpp>

#include <algorithm>
#include <array>
#include <cstdlib>
#include <set>

namespace flatdeform {

namespace {

void validate_quadratic(const FamilySpec& fam)
{
    if (fam.shifts.size() != fam.f_list.size())
        throw std::invalid_argument("family: shifts and f_list lengths differ");
    if (fam.f_list.empty())
        throw std::invalid_argument("family: no generator functions");
    for (size_t a = 0; a < fam.f_list.size(); ++a) {
        const LaurentPoly& f = fam.f_list[a];
        if (f.arity() != 2)
            throw std::invalid_argument("family: generator function must have two variables");
        for (const auto& t : f.terms()) {
            if (total_degree(t.first) != fam.shifts[a])
                throw std::invalid_argument(
                    "family: generator function not homogeneous of degree shifts[a]");
            if (f.coeff({t.first[1], t.first[0]}).first_difference(t.second))
                throw std::invalid_argument("family: generator function not symmetric");
        }
    }
}

/* slot c of the three-variable residual: the j-offset moves along we
 * (twice down on slot c, up on the others) and f_a's variables land in the
 * remaining two slots in cyclic order */
struct CyclicSlot {
    ExpVec we;
    std::vector<int> fslots;
};

const std::array<CyclicSlot, 3> kCyclic = {{
    {{-2, 1, 1}, {1, 2}},
    {{1, -2, 1}, {2, 0}},
    {{1, 1, -2}, {0, 1}},
}};

} // namespace

LaurentPoly fa1_residual(const FamilySpec& fam, const RelationVector& g)
{
    validate_quadratic(fam);
    std::vector<std::array<LaurentPoly, 3>> emb(fam.f_list.size());
    for (size_t a = 0; a < fam.f_list.size(); ++a)
        for (int c = 0; c < 3; ++c)
            emb[a][c] = fam.f_list[a].embedded(3, kCyclic[c].fslots);

    LaurentPoly residual(3);
    for (const auto& entry : g.entries) {
        int a = entry.first.first;
        int j = entry.first.second;
        if (a < 0 || a >= static_cast<int>(fam.f_list.size()))
            throw std::invalid_argument("relation vector: family index out of range");
        for (int c = 0; c < 3; ++c) {
            ExpVec e = kCyclic[c].we;
            for (int& x : e)
                x *= j;
            e[c] += g.s - fam.shifts[a];
            residual += emb[a][c].term_multiplied(e, entry.second);
        }
    }
    return residual;
}

CheckReport check_fa1(const FamilySpec& fam, const RelationVector& g, int qorder)
{
    CheckReport rep;
    rep.items.push_back(check_zero("quadratic relation equation", fa1_residual(fam, g), qorder));
    return rep;
}

LaurentPoly fah1_residual(int k, const LaurentPoly& f, const RelationVector& b)
{
    if (k < 1)
        throw std::invalid_argument("degree-k relation: k must be positive");
    if (f.arity() != k)
        throw std::invalid_argument("degree-k relation: f must have k variables");
    for (const auto& t : f.terms()) {
        if (total_degree(t.first) != k * (k + 1) / 2)
            throw std::invalid_argument("degree-k relation: f not homogeneous of degree k(k+1)/2");
        ExpVec p = t.first;
        std::sort(p.begin(), p.end());
        const QSeries ref = f.coeff(p);
        do {
            if (f.coeff(p).first_difference(ref))
                throw std::invalid_argument("degree-k relation: f not symmetric");
        } while (std::next_permutation(p.begin(), p.end()));
    }

    LaurentPoly residual(k + 1);
    for (int c = 0; c <= k; ++c) {
        std::vector<int> slots;
        for (int i = 0; i <= k; ++i)
            if (i != c)
                slots.push_back(i);
        LaurentPoly fc = f.embedded(k + 1, slots);
        for (const auto& entry : b.entries) {
            if (entry.first.first != 0)
                throw std::invalid_argument("degree-k relation: coefficient key must have a = 0");
            int beta = entry.first.second;
            ExpVec e(k + 1, -beta);
            e[c] = k * beta;
            residual += fc.term_multiplied(e, entry.second);
        }
    }
    return residual;
}

CheckReport check_fah1(int k, const LaurentPoly& f, const RelationVector& b, int qorder)
{
    CheckReport rep;
    rep.items.push_back(
        check_zero("degree-k relation equation", fah1_residual(k, f, b), qorder));
    return rep;
}

RelationSpace solve_relation_space(const FamilySpec& fam, int jwindow, const Rational& q,
                                   int qorder)
{
    validate_quadratic(fam);
    if (jwindow < 0)
        throw std::invalid_argument("relation system: jwindow must be nonnegative");

    int A = static_cast<int>(fam.f_list.size());
    std::vector<std::array<std::map<ExpVec, Rational>, 3>> ev(A);
    bool any = false;
    for (int a = 0; a < A; ++a)
        for (int c = 0; c < 3; ++c) {
            ev[a][c] = fam.f_list[a].embedded(3, kCyclic[c].fslots).evaluated_at_q(q, qorder);
            if (!ev[a][c].empty())
                any = true;
        }
    if (!any)
        throw EmptySystemError("relation system: every generator function evaluates to zero");

    std::vector<std::pair<int, int>> unknowns;
    for (int a = 0; a < A; ++a)
        for (int j = -jwindow; j <= jwindow; ++j)
            unknowns.emplace_back(a, j);

    /* every monomial an in-window unknown can reach */
    std::set<ExpVec> candidates;
    for (int a = 0; a < A; ++a)
        for (int c = 0; c < 3; ++c)
            for (const auto& t : ev[a][c])
                for (int j = -jwindow; j <= jwindow; ++j) {
                    ExpVec m = t.first;
                    for (int i = 0; i < 3; ++i)
                        m[i] += j * kCyclic[c].we[i];
                    m[c] += fam.s - fam.shifts[a];
                    candidates.insert(m);
                }

    /* A monomial's equation is kept only when it is exactly representable:
     * slot c pins the offset to j = (s - k_a - m_c)/2, so each (a, c) admits
     * at most one contributor, whose coefficient must be either an exactly
     * known zero or exactly known, fully visible below qorder, and in-window.
     * Anything else (unknown tail, truncated content, out-of-window offset)
     * would clip the equation, so it is dropped rather than imposed. */
    std::vector<ExpVec> kept;
    std::map<ExpVec, int> row_of;
    for (const ExpVec& m : candidates) {
        bool ok = true;
        for (int a = 0; a < A && ok; ++a)
            for (int c = 0; c < 3 && ok; ++c) {
                int num = fam.s - fam.shifts[a] - m[c];
                if (num % 2 != 0)
                    continue;
                int j = num / 2;
                ExpVec T{m[kCyclic[c].fslots[0]] - j, m[kCyclic[c].fslots[1]] - j};
                QSeries w = fam.f_list[a].coeff(T);
                if (w.is_zero() && w.is_exact())
                    continue;
                if (!w.is_exact() || w.content_hi() > qorder || std::abs(j) > jwindow)
                    ok = false;
            }
        if (ok) {
            row_of[m] = static_cast<int>(kept.size());
            kept.push_back(m);
        }
    }

    RatMatrix mat(kept.size(), std::vector<Rational>(unknowns.size(), Rational(0)));
    for (size_t u = 0; u < unknowns.size(); ++u) {
        int a = unknowns[u].first;
        int j = unknowns[u].second;
        for (int c = 0; c < 3; ++c)
            for (const auto& t : ev[a][c]) {
                ExpVec m = t.first;
                for (int i = 0; i < 3; ++i)
                    m[i] += j * kCyclic[c].we[i];
                m[c] += fam.s - fam.shifts[a];
                auto it = row_of.find(m);
                if (it != row_of.end())
                    mat[it->second][u] += t.second;
            }
    }

    /* unknowns no kept equation touches are unobservable at this truncation;
     * excise them instead of reporting them as free kernel directions */
    std::vector<size_t> seen;
    for (size_t u = 0; u < unknowns.size(); ++u)
        for (const auto& row : mat)
            if (row[u] != 0) {
                seen.push_back(u);
                break;
            }
    RatMatrix slim(kept.size(), std::vector<Rational>(seen.size(), Rational(0)));
    for (size_t r = 0; r < kept.size(); ++r)
        for (size_t i = 0; i < seen.size(); ++i)
            slim[r][i] = mat[r][seen[i]];

    auto kern = kernel_basis(slim, static_cast<int>(seen.size()));
    RelationSpace out;
    out.rows = static_cast<int>(kept.size());
    out.cols = static_cast<int>(seen.size());
    out.unseen = static_cast<int>(unknowns.size() - seen.size());
    out.dimension = static_cast<int>(kern.size());
    for (const auto& vec : kern) {
        std::map<std::pair<int, int>, Rational> v;
        for (size_t i = 0; i < seen.size(); ++i)
            if (vec[i] != 0)
                v[unknowns[seen[i]]] = vec[i];
        out.basis.push_back(std::move(v));
    }
    return out;
}

int ds_monomial(const std::vector<int>& shifts, int s, int jwindow)
{
    std::set<int> seen;
    for (int k : shifts) {
        if (k < 0)
            throw std::invalid_argument("monomial relation space: shifts must be nonnegative");
        if (!seen.insert(k).second)
            throw std::invalid_argument("monomial relation space: shifts must be distinct");
    }
    FamilySpec fam{shifts, generator_genfun({}, shifts), s};
    return solve_relation_space(fam, jwindow, Rational(0), 1).dimension;
}

} // namespace flatdeform
