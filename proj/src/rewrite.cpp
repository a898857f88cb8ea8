#include <flatdeform/rewrite.hpp>

#include <flatdeform/check.hpp>

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace flatdeform {

namespace {

uint64_t splitmix64(uint64_t x)
{
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

struct SeedStream {
    uint64_t s;
    explicit SeedStream(uint64_t seed) : s(splitmix64(seed)) {}
    uint64_t next()
    {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return s;
    }
    int below(int n) { return static_cast<int>(next() % static_cast<uint64_t>(n)); }
};

void bump(std::map<int, int>& f, int i, int by)
{
    auto it = f.emplace(i, 0).first;
    it->second += by;
    if (it->second == 0)
        f.erase(it);
    else if (it->second < 0)
        throw std::invalid_argument("rewrite step does not apply");
}

} // namespace

int XYMonomial::xweight() const
{
    int w = 0;
    for (const auto& f : xfactors)
        w += f.second;
    return w;
}

int XYMonomial::yweight() const
{
    int w = 0;
    for (const auto& f : yfactors)
        w += f.second;
    return w;
}

int XYMonomial::degree() const
{
    int d = 0;
    for (const auto& f : xfactors)
        d += f.first * f.second;
    for (const auto& f : yfactors)
        d += ((k + 1) * f.first + k * (k + 1) / 2) * f.second;
    return d;
}

long long XYMonomial::yindex_sum() const
{
    long long s = 0;
    for (const auto& f : yfactors)
        s += static_cast<long long>(f.first) * f.second;
    return s;
}

bool XYMonomial::valid() const
{
    if (k < 1)
        return false;
    for (const auto& f : xfactors)
        if (f.second <= 0)
            return false;
    for (const auto& f : yfactors)
        if (f.second <= 0)
            return false;
    return true;
}

std::string XYMonomial::to_string() const
{
    if (xfactors.empty() && yfactors.empty())
        return "1";
    std::string out;
    auto app = [&out](const char* gen, int i, int e) {
        if (!out.empty())
            out += " ";
        out += gen + ("_" + std::to_string(i));
        if (e > 1)
            out += "^" + std::to_string(e);
    };
    for (const auto& f : xfactors)
        app("x", f.first, f.second);
    for (const auto& f : yfactors)
        app("ybar", f.first, f.second);
    return out;
}

Monomial phi(const XYMonomial& m)
{
    std::map<int, int> acc(m.xfactors.begin(), m.xfactors.end());
    for (const auto& f : m.yfactors)
        for (int t = 0; t <= m.k; ++t)
            acc[f.first + t] += f.second;
    Monomial out;
    out.factors.assign(acc.begin(), acc.end());
    return out;
}

std::vector<ReductionStep> applicable_steps(const XYMonomial& m)
{
    std::vector<ReductionStep> steps;
    for (const auto& f : m.xfactors) {
        int i = f.first;
        bool run = true;
        for (int t = 1; run && t <= m.k; ++t)
            run = m.xfactors.count(i + t) != 0;
        if (run)
            steps.push_back({Rule::R1, i});
    }
    for (const auto& f : m.xfactors)
        if (m.yfactors.count(f.first + 1))
            steps.push_back({Rule::R2, f.first});
    return steps;
}

bool is_reduced(const XYMonomial& m) { return applicable_steps(m).empty(); }

XYMonomial apply_step(const XYMonomial& m, const ReductionStep& s)
{
    XYMonomial r = m;
    if (s.rule == Rule::R1) {
        for (int t = 0; t <= m.k; ++t)
            bump(r.xfactors, s.position + t, -1);
        bump(r.yfactors, s.position, +1);
    } else {
        bump(r.xfactors, s.position, -1);
        bump(r.yfactors, s.position + 1, -1);
        bump(r.xfactors, s.position + m.k + 1, +1);
        bump(r.yfactors, s.position, +1);
    }
    return r;
}

XYMonomial normal_form(XYMonomial m, Strategy strategy, uint64_t seed)
{
    SeedStream rng(seed);
    for (long long round = 0;; ++round) {
        auto steps = applicable_steps(m);
        if (steps.empty())
            return m;
        // steps hold the R1 block then the R2 block, each by position
        size_t pick = 0;
        auto first_r2 = std::find_if(steps.begin(), steps.end(), [](const auto& s) {
            return s.rule == Rule::R2;
        });
        switch (strategy) {
        case Strategy::leftmost_r1:
            break;
        case Strategy::leftmost_r2:
            if (first_r2 != steps.end())
                pick = static_cast<size_t>(first_r2 - steps.begin());
            break;
        case Strategy::rightmost:
            for (size_t i = 1; i < steps.size(); ++i)
                if (steps[i].position >= steps[pick].position)
                    pick = i;
            break;
        case Strategy::alternating:
            if (round % 2 && first_r2 != steps.end())
                pick = static_cast<size_t>(first_r2 - steps.begin());
            break;
        case Strategy::seeded:
            pick = static_cast<size_t>(rng.below(static_cast<int>(steps.size())));
            break;
        }
        m = apply_step(m, steps[pick]);
    }
}

namespace {

/* reduce by the first strategy while checking, step by step, that the
 * expanded image is unchanged and the termination measures strictly move;
 * returns the normal form and accumulates the step count */
XYMonomial checked_reduction(const XYMonomial& m, long long& steps)
{
    Monomial image = phi(m);
    XYMonomial cur = m;
    while (true) {
        auto app = applicable_steps(cur);
        if (app.empty())
            break;
        XYMonomial nxt = apply_step(cur, app.front());
        ++steps;
        bool ok = app.front().rule == Rule::R1
                      ? nxt.xweight() == cur.xweight() - (cur.k + 1)
                      : nxt.xweight() == cur.xweight() &&
                            nxt.yindex_sum() == cur.yindex_sum() - 1;
        if (!ok || phi(nxt) != image)
            throw CheckFailed("rewrite step broke an invariant at " +
                              cur.to_string());
        cur = std::move(nxt);
    }
    return cur;
}

void check_one(const XYMonomial& m, uint64_t seed, long long& steps)
{
    XYMonomial want = checked_reduction(m, steps);
    const Strategy rest[] = {Strategy::leftmost_r2, Strategy::rightmost,
                             Strategy::alternating, Strategy::seeded};
    for (Strategy s : rest) {
        XYMonomial got = normal_form(m, s, seed);
        if (got != want)
            throw CheckFailed("normal forms diverge at " + m.to_string() + ": " +
                              want.to_string() + " vs " + got.to_string());
    }
}

XYMonomial random_monomial(int k, SeedStream& rng, int max_weight,
                           std::pair<int, int> window)
{
    XYMonomial m;
    m.k = k;
    int budget = 1 + rng.below(max_weight);
    // half the draws cluster in a band barely wider than a run, where
    // overlapping redexes are the norm; the rest stay uniform so sparse
    // shapes are covered too
    std::pair<int, int> band = window;
    int width = std::min(window.second - window.first, k + 2);
    if (rng.next() % 2) {
        int c = window.first + rng.below(window.second - window.first - width + 1);
        band = {c, c + width};
    }
    int span = band.second - band.first + 1;
    while (budget > 0) {
        if (budget >= k + 1 && span > k && rng.next() % 3 == 0) {
            m.yfactors[band.first + rng.below(span - k)] += 1;
            budget -= k + 1;
        } else {
            m.xfactors[band.first + rng.below(span)] += 1;
            budget -= 1;
        }
    }
    return m;
}

/* every monomial of weight <= max_weight with x-indices and marker runs
 * inside the window */
void enumerate_all(int k, std::pair<int, int> window, int max_weight, int from_x,
                   int from_y, XYMonomial& m, std::vector<XYMonomial>& out)
{
    out.push_back(m);
    for (int i = from_x; i <= window.second; ++i) {
        if (m.weight() + 1 > max_weight)
            break;
        m.xfactors[i] += 1;
        enumerate_all(k, window, max_weight, i, from_y, m, out);
        bump(m.xfactors, i, -1);
    }
    if (m.weight() + k + 1 > max_weight)
        return;
    for (int j = from_y; j + k <= window.second; ++j) {
        m.yfactors[j] += 1;
        enumerate_all(k, window, max_weight, window.second + 1, j, m, out);
        bump(m.yfactors, j, -1);
    }
}

} // namespace

ConfluenceReport confluence_test(int k, long long samples, uint64_t seed,
                                 int max_weight, std::pair<int, int> index_window)
{
    if (k < 1)
        throw std::invalid_argument("confluence_test: k must be positive");
    if (samples < 1)
        throw std::invalid_argument("confluence_test: need at least one sample");
    if (max_weight < 1 || index_window.first > index_window.second)
        throw std::invalid_argument("confluence_test: empty sampling space");

    ConfluenceReport rep;
    rep.k = k;
    rep.sampled = samples;

    long long total_steps = 0;
    long long bad = samples; // first failing sample, if any

#pragma omp parallel for schedule(static) reduction(+ : total_steps)               \
    reduction(min : bad)
    for (long long i = 0; i < samples; ++i) {
        SeedStream rng(seed ^ splitmix64(static_cast<uint64_t>(i)));
        XYMonomial m = random_monomial(k, rng, max_weight, index_window);
        try {
            check_one(m, rng.next(), total_steps);
        } catch (const CheckFailed&) {
            bad = i;
        }
    }
    if (bad < samples) {
        // reproduce the first failure serially for a deterministic message
        SeedStream rng(seed ^ splitmix64(static_cast<uint64_t>(bad)));
        XYMonomial m = random_monomial(k, rng, max_weight, index_window);
        long long scratch = 0;
        check_one(m, rng.next(), scratch);
        throw CheckFailed("confluence sample diverged but replays clean");
    }

    // exhaustive small window: every monomial, every strategy, plus
    // injectivity of the expansion on the reduced ones
    XYMonomial root;
    root.k = k;
    std::vector<XYMonomial> all;
    enumerate_all(k, {-4, 4}, std::min(max_weight, 4), -4, -4, root, all);
    std::map<Monomial, XYMonomial> images;
    for (const auto& m : all) {
        SeedStream rng(splitmix64(seed) ^ static_cast<uint64_t>(rep.exhaustive));
        check_one(m, rng.next(), total_steps);
        ++rep.exhaustive;
        if (is_reduced(m)) {
            auto [it, fresh] = images.emplace(phi(m), m);
            if (!fresh && it->second != m)
                throw CheckFailed("reduced monomials share an image: " +
                                  m.to_string() + " and " + it->second.to_string());
        }
    }

    rep.steps = total_steps;
    rep.pass = true;
    return rep;
}

namespace {

/* x-multiset count: positions pos..N, `run` consecutive occupied positions
 * directly before pos, avoiding any k+1 run, skipping forbidden positions,
 * consuming exactly the remaining weight and degree */
long long count_x(int k, int N, const std::vector<int8_t>& forbidden, int pos,
                  int run, int wleft, long long nleft)
{
    if (wleft == 0)
        return nleft == 0 ? 1 : 0;
    if (pos > N)
        return 0;
    // degree reachability: all remaining weight sits in [pos, N]
    if (nleft < static_cast<long long>(wleft) * pos ||
        nleft > static_cast<long long>(wleft) * N)
        return 0;
    long long total = count_x(k, N, forbidden, pos + 1, 0, wleft, nleft);
    if (!forbidden[static_cast<size_t>(pos + N)] && run < k)
        for (int e = 1; e <= wleft; ++e)
            total += count_x(k, N, forbidden, pos + 1, run + 1, wleft - e,
                             nleft - static_cast<long long>(e) * pos);
    return total;
}

long long count_with_markers(int k, int N, int jmin, int wleft, long long nleft,
                             std::vector<int8_t>& forbidden, bool haveY)
{
    long long total = 0;
    if (haveY)
        total += count_x(k, N, forbidden, -N, 0, wleft, nleft);
    if (wleft < k + 1)
        return total;
    int base = k * (k + 1) / 2;
    for (int j = jmin; j + k <= N; ++j) {
        int8_t saved = 0;
        if (j - 1 >= -N) { // the slot below the marker loses its generator
            saved = forbidden[static_cast<size_t>(j - 1 + N)];
            forbidden[static_cast<size_t>(j - 1 + N)] = 1;
        }
        total += count_with_markers(k, N, j, wleft - (k + 1),
                                    nleft - (k + 1) * j - base, forbidden, true);
        if (j - 1 >= -N)
            forbidden[static_cast<size_t>(j - 1 + N)] = saved;
    }
    return total;
}

} // namespace

int count_reduced(int k, int N, const GradedKey& key, bool requireY)
{
    if (k < 1)
        throw std::invalid_argument("count_reduced: k must be positive");
    if (N < 0)
        throw std::invalid_argument("count_reduced: negative window");
    if (key.l < 0)
        return 0;
    std::vector<int8_t> forbidden(static_cast<size_t>(2 * N + 1), 0);
    long long total =
        count_with_markers(k, N, -N, key.l, key.n, forbidden, !requireY);
    return static_cast<int>(total);
}

} // namespace flatdeform
