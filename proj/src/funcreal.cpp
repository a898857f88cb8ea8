#include <flatdeform/funcreal.hpp>

#include <algorithm>
#include <climits>
#include <numeric>
#include <optional>

namespace flatdeform {

namespace {

int permutation_sign(const std::vector<int>& p)
{
    int inv = 0;
    for (size_t i = 0; i < p.size(); ++i)
        for (size_t j = i + 1; j < p.size(); ++j)
            if (p[i] > p[j])
                ++inv;
    return (inv & 1) ? -1 : 1;
}

int clamp_ceiling(long long h)
{
    return h >= QSeries::kExactCeiling ? QSeries::kExactCeiling : static_cast<int>(h);
}

Monomial merged(const Monomial& a, const Monomial& b)
{
    Monomial out;
    out.factors.reserve(a.factors.size() + b.factors.size());
    size_t i = 0, j = 0;
    while (i < a.factors.size() || j < b.factors.size()) {
        if (j == b.factors.size() || (i < a.factors.size() && a.factors[i].first < b.factors[j].first))
            out.factors.push_back(a.factors[i++]);
        else if (i == a.factors.size() || b.factors[j].first < a.factors[i].first)
            out.factors.push_back(b.factors[j++]);
        else {
            out.factors.push_back({a.factors[i].first, a.factors[i].second + b.factors[j].second});
            ++i, ++j;
        }
    }
    return out;
}

/* interleave two strictly increasing index lists; zero on a shared index */
std::optional<std::pair<Monomial, int>> fused(const Monomial& a, const Monomial& b)
{
    std::vector<int> ea = a.expanded(), eb = b.expanded();
    int inv = 0;
    for (int x : ea)
        for (int y : eb) {
            if (x == y)
                return std::nullopt;
            if (x > y)
                ++inv;
        }
    Monomial m = merged(a, b);
    return std::make_pair(m, (inv & 1) ? -1 : 1);
}

} // namespace

std::vector<int> Monomial::expanded() const
{
    std::vector<int> out;
    out.reserve(weight());
    for (const auto& f : factors)
        for (int t = 0; t < f.second; ++t)
            out.push_back(f.first);
    return out;
}

bool Monomial::valid() const
{
    for (size_t i = 0; i < factors.size(); ++i) {
        if (factors[i].second < 1)
            return false;
        if (i > 0 && factors[i - 1].first >= factors[i].first)
            return false;
    }
    return true;
}

std::string Monomial::to_string() const
{
    if (factors.empty())
        return "1";
    std::string out;
    for (const auto& f : factors) {
        if (!out.empty())
            out += " ";
        out += "x_" + std::to_string(f.first);
        if (f.second > 1)
            out += "^" + std::to_string(f.second);
    }
    return out;
}

QSeries AlgebraElement::coeff(const Monomial& m) const
{
    auto it = terms_.find(m);
    return it == terms_.end() ? QSeries::zero(qceil_) : it->second;
}

int AlgebraElement::qval() const
{
    int v = qceil_;
    for (const auto& t : terms_)
        v = std::min(v, t.second.lo());
    return v;
}

void AlgebraElement::add_term(const Monomial& m, const QSeries& c)
{
    if (!m.valid())
        throw std::invalid_argument("malformed monomial " + m.to_string());
    if (m.weight() != l_ || m.degree() != n_)
        throw std::invalid_argument("monomial " + m.to_string() + " is off grade ("
                                    + std::to_string(n_) + "," + std::to_string(l_) + ")");
    if (kind_ == Kind::fermionic)
        for (const auto& f : m.factors)
            if (f.second > 1)
                return; // squared generator: exactly zero
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        if (c.is_zero())
            qceil_ = std::min(qceil_, c.hi());
        else
            terms_.emplace(m, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) {
        qceil_ = std::min(qceil_, it->second.hi());
        terms_.erase(it);
    }
}

AlgebraElement AlgebraElement::operator*(const AlgebraElement& o) const
{
    if (kind_ != o.kind_)
        throw std::invalid_argument("mixed element kinds in product");
    int h = clamp_ceiling(std::min(static_cast<long long>(qceil_) + o.qval(),
                                   static_cast<long long>(o.qceil_) + qval()));
    AlgebraElement out(kind_, n_ + o.n_, l_ + o.l_, h);
    for (const auto& [m1, c1] : terms_)
        for (const auto& [m2, c2] : o.terms_) {
            QSeries c = (c1 * c2).truncated(h);
            if (kind_ == Kind::bosonic) {
                out.add_term(merged(m1, m2), c);
            } else {
                auto fm = fused(m1, m2);
                if (fm)
                    out.add_term(fm->first, fm->second < 0 ? c.scaled(-1) : c);
            }
        }
    return out;
}

AlgebraElement AlgebraElement::scaled(const QSeries& c) const
{
    AlgebraElement out(kind_, n_, l_, clamp_ceiling(static_cast<long long>(qceil_) + c.lo()));
    for (const auto& t : terms_)
        out.add_term(t.first, t.second * c);
    return out;
}

AlgebraElement AlgebraElement::index_shifted(int s) const
{
    AlgebraElement out(kind_, n_ + s * l_, l_, qceil_);
    for (const auto& t : terms_) {
        Monomial m = t.first;
        for (auto& f : m.factors)
            f.first += s;
        out.add_term(m, t.second);
    }
    return out;
}

std::string AlgebraElement::to_string() const
{
    if (terms_.empty())
        return "0";
    std::string out;
    for (const auto& t : terms_) {
        if (!out.empty())
            out += " + ";
        out += "(" + t.second.to_string() + ")*" + t.first.to_string();
    }
    return out;
}

LaurentPoly psi(const AlgebraElement& e)
{
    LaurentPoly out(e.l(), e.qceil());
    for (const auto& [m, c] : e.terms()) {
        std::vector<int> ex = m.expanded();
        int l = static_cast<int>(ex.size());
        std::vector<int> perm(l);
        std::iota(perm.begin(), perm.end(), 0);
        QSeries neg = c.scaled(-1);
        do {
            ExpVec key(l);
            for (int t = 0; t < l; ++t)
                key[perm[t]] = ex[t];
            bool odd = e.kind() == Kind::fermionic && permutation_sign(perm) < 0;
            out.add_term(key, odd ? neg : c);
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return out;
}

AlgebraElement psi_inverse(const LaurentPoly& p, Kind kind)
{
    int l = p.arity();
    int n = 0;
    bool first = true;
    for (const auto& t : p.terms()) {
        int d = total_degree(t.first);
        if (first) {
            n = d;
            first = false;
        } else if (d != n) {
            throw std::invalid_argument("realization mixes total z-degrees "
                                        + std::to_string(n) + " and " + std::to_string(d));
        }
    }
    AlgebraElement e(kind, n, l, p.qceil());
    for (const auto& [key, c] : p.terms()) {
        if (!std::is_sorted(key.begin(), key.end()))
            continue;
        Monomial m;
        Integer stab = 1;
        int i = 0;
        while (i < l) {
            int j = i;
            while (j < l && key[j] == key[i])
                ++j;
            m.factors.push_back({key[i], j - i});
            for (int t = 2; t <= j - i; ++t)
                stab *= t;
            i = j;
        }
        if (kind == Kind::fermionic) {
            if (stab != 1)
                throw NotAntisymmetricError("diagonal content at " + m.to_string());
            e.add_term(m, c);
        } else {
            e.add_term(m, c.scaled(Rational(Integer(1), stab)));
        }
    }
    LaurentPoly back = psi(e);
    if (auto d = back.first_difference(p)) {
        std::string msg = "not in the realization image: mismatch at q^"
                          + std::to_string(d->qexp);
        if (kind == Kind::bosonic)
            throw NotSymmetricError(msg);
        throw NotAntisymmetricError(msg);
    }
    return e;
}

LaurentPoly product_fr1(const LaurentPoly& f, const LaurentPoly& g, Kind kind)
{
    int a = f.arity(), b = g.arity(), n = a + b;
    std::vector<int> sel(a);
    std::iota(sel.begin(), sel.end(), 0);
    std::optional<LaurentPoly> acc;
    while (true) {
        std::vector<int> comp;
        comp.reserve(b);
        size_t si = 0;
        for (int v = 0; v < n; ++v) {
            if (si < sel.size() && sel[si] == v)
                ++si;
            else
                comp.push_back(v);
        }
        LaurentPoly term = f.embedded(n, sel) * g.embedded(n, comp);
        if (kind == Kind::fermionic) {
            int inv = 0;
            for (int t = 0; t < a; ++t)
                inv += sel[t] - t;
            if (inv & 1)
                term = term.scaled(Rational(-1));
        }
        acc = acc ? *acc + term : term;

        int i = a - 1;
        while (i >= 0 && sel[i] == n - a + i)
            --i;
        if (i < 0)
            break;
        ++sel[i];
        for (int j = i + 1; j < a; ++j)
            sel[j] = sel[j - 1] + 1;
    }
    return *acc;
}

std::vector<LaurentPoly> generator_genfun(const std::map<std::pair<int, int>, QSeries>& u,
                                          const std::vector<int>& shifts)
{
    for (const auto& entry : u) {
        if (entry.first.first < 0 || entry.first.first >= static_cast<int>(shifts.size()))
            throw std::invalid_argument("generator index out of range");
        if (entry.first.second < 1)
            throw std::invalid_argument("correction offsets start at 1");
    }
    std::vector<LaurentPoly> out;
    out.reserve(shifts.size());
    for (int a = 0; a < static_cast<int>(shifts.size()); ++a) {
        int k = shifts[a];
        LaurentPoly f(2);
        f.add_term({k, 0}, QSeries::constant(1));
        f.add_term({0, k}, QSeries::constant(1));
        for (auto it = u.lower_bound({a, INT_MIN}); it != u.end() && it->first.first == a; ++it) {
            int j = it->first.second;
            f.add_term({-j, k + j}, it->second);
            f.add_term({k + j, -j}, it->second);
        }
        out.push_back(std::move(f));
    }
    return out;
}

} // namespace flatdeform
