#include <flatdeform/constraints.hpp>

#include <algorithm>
#include <cassert>
#include <numeric>
#include <sstream>

namespace flatdeform {

namespace {

int total_deg(const std::vector<int>& e)
{
    return std::accumulate(e.begin(), e.end(), 0);
}

} // namespace

int APoly::min_adeg() const
{
    int best = -1;
    for (const auto& [e, c] : terms) {
        int d = total_deg(e);
        if (best < 0 || d < best)
            best = d;
    }
    return best;
}

int APoly::max_adeg() const
{
    int best = -1;
    for (const auto& [e, c] : terms)
        best = std::max(best, total_deg(e));
    return best;
}

APoly& APoly::operator+=(const APoly& o)
{
    if (terms.empty() && W == 0 && adegCap == 0) {
        W = o.W;
        adegCap = o.adegCap;
    }
    for (const auto& [e, c] : o.terms) {
        auto [it, fresh] = terms.insert({e, c});
        if (!fresh) {
            it->second += c;
            if (it->second == 0)
                terms.erase(it);
        }
    }
    return *this;
}

APoly& APoly::operator-=(const APoly& o)
{
    if (terms.empty() && W == 0 && adegCap == 0) {
        W = o.W;
        adegCap = o.adegCap;
    }
    for (const auto& [e, c] : o.terms) {
        auto [it, fresh] = terms.insert({e, -c});
        if (!fresh) {
            it->second -= c;
            if (it->second == 0)
                terms.erase(it);
        }
    }
    return *this;
}

APoly APoly::operator-(const APoly& o) const
{
    APoly out = *this;
    out -= o;
    return out;
}

APoly APoly::times_minus_a(int m) const
{
    if (m < 1 || m > W)
        throw std::invalid_argument("APoly: unknown index out of range");
    APoly out;
    out.W = W;
    out.adegCap = adegCap;
    for (const auto& [e, c] : terms) {
        if (total_deg(e) + 1 > adegCap)
            continue;
        std::vector<int> grown = e;
        ++grown[m - 1];
        out.terms[std::move(grown)] = -c;
    }
    return out;
}

QSeries APoly::evaluate(const std::map<int, QSeries>& vals) const
{
    QSeries acc; // exact zero
    for (const auto& [e, c] : terms) {
        QSeries prod = QSeries::constant(c);
        bool dead = false;
        for (int j = 0; j < W && !dead; ++j) {
            if (e[j] == 0)
                continue;
            auto it = vals.find(j + 1);
            if (it == vals.end()) {
                dead = true; // unknown not in the candidate: exactly zero
                break;
            }
            for (int r = 0; r < e[j]; ++r)
                prod *= it->second;
        }
        if (!dead)
            acc += prod;
    }
    return acc;
}

std::string APoly::to_string() const
{
    if (terms.empty())
        return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [e, c] : terms) {
        if (!first)
            out << " + ";
        first = false;
        out << rational_to_string(c);
        for (int j = 0; j < W; ++j) {
            if (e[j] == 0)
                continue;
            out << "*a" << j + 1;
            if (e[j] > 1)
                out << "^" << e[j];
        }
    }
    return out.str();
}

namespace {

/* leftmost (or rightmost) position t with idx[t+1] == idx[t] + 1 */
int route_pair(const std::vector<int>& idx, bool leftmost)
{
    int found = -1;
    for (int t = 0; t + 1 < static_cast<int>(idx.size()); ++t)
        if (idx[t + 1] - idx[t] == 1) {
            if (leftmost)
                return t;
            found = t;
        }
    return found;
}

Monomial collapse(const std::vector<int>& idx)
{
    Monomial m;
    for (int v : idx) {
        if (!m.factors.empty() && m.factors.back().first == v)
            ++m.factors.back().second;
        else
            m.factors.push_back({v, 1});
    }
    return m;
}

struct Walker {
    int W;
    int cap;
    std::pair<int, int> win;
    bool leftmost;
    std::map<Monomial, APoly>& out;

    void run(const std::vector<int>& idx, std::vector<int>& avec, int deg,
             int sign)
    {
        assert(total_deg(avec) == deg);
        int t = route_pair(idx, leftmost);
        if (t < 0) {
            APoly& poly = out[collapse(idx)];
            poly.W = W;
            poly.adegCap = cap;
            auto [it, fresh] = poly.terms.insert({avec, Rational(sign)});
            if (!fresh) {
                it->second += sign;
                if (it->second == 0)
                    poly.terms.erase(it);
            }
            return;
        }
        if (deg == cap)
            return; // cannot reach the basis within the degree budget
        int j = idx[t];
        for (int m = 1; m <= W; ++m) {
            if (j - m < win.first || j + 1 + m > win.second) {
                std::ostringstream msg;
                msg << "substitution at x_" << j << "x_" << j + 1
                    << " reaches index "
                    << (j - m < win.first ? j - m : j + 1 + m)
                    << " outside [" << win.first << ", " << win.second << "]";
                throw WindowEscape(msg.str());
            }
            std::vector<int> next = idx;
            next.erase(next.begin() + t, next.begin() + t + 2);
            next.insert(std::lower_bound(next.begin(), next.end(), j - m),
                        j - m);
            next.insert(
                std::lower_bound(next.begin(), next.end(), j + 1 + m),
                j + 1 + m);
            ++avec[m - 1];
            run(next, avec, deg + 1, -sign);
            --avec[m - 1];
        }
    }
};

ReducedExpansion reduce_route(int i, int W, int cap, std::pair<int, int> win,
                              bool leftmost)
{
    ReducedExpansion exp;
    exp.W = W;
    exp.adegCap = cap;
    Walker walker{W, cap, win, leftmost, exp.terms};
    std::vector<int> avec(W, 0);
    walker.run({i, i + 1, i + 2}, avec, 0, 1);
    for (auto it = exp.terms.begin(); it != exp.terms.end();)
        it = it->second.is_zero() ? exp.terms.erase(it) : std::next(it);
    return exp;
}

} // namespace

std::pair<ReducedExpansion, ReducedExpansion>
reduce_two_ways(int i, int W, int adegCap, std::pair<int, int> indexWindow)
{
    if (W < 1)
        throw std::invalid_argument("reduce_two_ways: W must be >= 1");
    if (adegCap < 0)
        throw std::invalid_argument("reduce_two_ways: adegCap must be >= 0");
    if (indexWindow.first > indexWindow.second)
        throw std::invalid_argument("reduce_two_ways: empty index window");
    if (i < indexWindow.first || i + 2 > indexWindow.second) {
        std::ostringstream msg;
        msg << "probe x_" << i << "x_" << i + 1 << "x_" << i + 2
            << " does not fit in [" << indexWindow.first << ", "
            << indexWindow.second << "]";
        throw WindowEscape(msg.str());
    }
    return {reduce_route(i, W, adegCap, indexWindow, true),
            reduce_route(i, W, adegCap, indexWindow, false)};
}

std::vector<Constraint> derive_constraints(int W, int adegCap,
                                           std::pair<int, int> indexWindow)
{
    auto [r1, r2] = reduce_two_ways(0, W, adegCap, indexWindow);

    std::map<Monomial, APoly> diff = r1.terms;
    for (const auto& [key, poly] : r2.terms) {
        auto [it, fresh] = diff.insert({key, APoly{W, adegCap, {}}});
        it->second -= poly;
    }
    std::vector<Constraint> out;
    for (auto& [key, poly] : diff)
        if (!poly.is_zero())
            out.push_back({key, std::move(poly)});
    return out;
}

std::map<int, QSeries> theta_candidate(int W)
{
    std::map<int, QSeries> cand;
    for (int beta = 1; 3 * beta - 1 <= W; ++beta) {
        Rational s = beta % 2 ? Rational(-1) : Rational(1);
        cand[3 * beta - 1] = QSeries::monomial(s, beta * (3 * beta - 1) / 2);
        if (3 * beta <= W)
            cand[3 * beta] = QSeries::monomial(s, beta * (3 * beta + 1) / 2);
    }
    return cand;
}

bool CandidateReport::all_pass() const
{
    return std::all_of(items.begin(), items.end(),
                       [](const CandidateCheck& c) { return c.pass; });
}

CandidateReport check_candidate(const std::map<int, QSeries>& candidate,
                                const std::vector<Constraint>& constraints,
                                int qorder)
{
    CandidateReport rep;
    rep.qorder = qorder;
    rep.items.resize(constraints.size());
    int n = static_cast<int>(constraints.size());
#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < n; ++t) {
        QSeries v = constraints[t].residual.evaluate(candidate);
        CandidateCheck item;
        item.key = constraints[t].key;
        if (!v.is_zero() && v.lo() < qorder) {
            item.pass = false;
            item.vanishes_to = v.lo(); // first surviving term
        } else if (v.hi() < qorder) {
            item.pass = false;
            item.vanishes_to = v.hi(); // certificate runs out early
        } else {
            item.pass = true;
            item.vanishes_to = qorder;
        }
        rep.items[t] = item;
    }
    return rep;
}

} // namespace flatdeform
