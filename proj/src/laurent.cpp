#include <flatdeform/laurent.hpp>

#include <algorithm>
#include <climits>
#include <sstream>

namespace flatdeform {

namespace {

/* total degree first, lexicographic tie-break; used to pick leading terms
 * during division */
struct DegLexGreater {
    bool operator()(const ExpVec& a, const ExpVec& b) const
    {
        int da = total_degree(a), db = total_degree(b);
        if (da != db)
            return da > db;
        return a > b;
    }
};

int permutation_sign(const std::vector<int>& p)
{
    int inv = 0;
    for (size_t i = 0; i < p.size(); ++i)
        for (size_t j = i + 1; j < p.size(); ++j)
            if (p[i] > p[j])
                ++inv;
    return (inv & 1) ? -1 : 1;
}

constexpr size_t kDivisionGuard = size_t(1) << 21;

} // namespace

LaurentPoly LaurentPoly::monomial(int arity, const ExpVec& e, const QSeries& c, int qceil)
{
    if (static_cast<int>(e.size()) != arity)
        throw std::invalid_argument("LaurentPoly::monomial: exponent arity mismatch");
    LaurentPoly p(arity, qceil);
    p.insert_add(e, c);
    return p;
}

void LaurentPoly::check_arity(const LaurentPoly& o) const
{
    if (arity_ != o.arity_)
        throw std::invalid_argument("LaurentPoly: arity mismatch");
}

void LaurentPoly::insert_add(const ExpVec& e, const QSeries& c)
{
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        if (c.is_zero()) {
            if (c.hi() < qceil_)
                qceil_ = c.hi();
            return;
        }
        terms_.emplace(e, c);
        return;
    }
    QSeries s = it->second + c;
    if (s.is_zero()) {
        if (s.hi() < qceil_)
            qceil_ = s.hi();
        terms_.erase(it);
    } else {
        it->second = std::move(s);
    }
}

QSeries LaurentPoly::coeff(const ExpVec& e) const
{
    auto it = terms_.find(e);
    if (it == terms_.end())
        return QSeries::zero(qceil_);
    return it->second;
}

int LaurentPoly::qval() const
{
    int v = qceil_;
    for (const auto& t : terms_)
        v = std::min(v, t.second.lo());
    return v;
}

int LaurentPoly::min_window() const
{
    int h = qceil_;
    for (const auto& t : terms_)
        h = std::min(h, t.second.hi());
    return h;
}

LaurentPoly LaurentPoly::operator-() const
{
    LaurentPoly r(*this);
    for (auto& t : r.terms_)
        t.second = -t.second;
    return r;
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& o) const
{
    check_arity(o);
    LaurentPoly r(arity_, std::min(qceil_, o.qceil_));
    auto ia = terms_.begin(), ib = o.terms_.begin();
    while (ia != terms_.end() || ib != o.terms_.end()) {
        if (ib == o.terms_.end() || (ia != terms_.end() && ia->first < ib->first)) {
            r.insert_add(ia->first, ia->second + QSeries::zero(o.qceil_));
            ++ia;
        } else if (ia == terms_.end() || ib->first < ia->first) {
            r.insert_add(ib->first, ib->second + QSeries::zero(qceil_));
            ++ib;
        } else {
            r.insert_add(ia->first, ia->second + ib->second);
            ++ia;
            ++ib;
        }
    }
    return r;
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly& o) const
{
    return *this + (-o);
}

LaurentPoly LaurentPoly::operator*(const LaurentPoly& o) const
{
    check_arity(o);
    long long hmax = std::min(static_cast<long long>(qceil_) + o.qval(),
                              static_cast<long long>(o.qceil_) + qval());
    int h = hmax >= QSeries::kExactCeiling ? QSeries::kExactCeiling : static_cast<int>(hmax);
    LaurentPoly r(arity_, h);
    ExpVec key(arity_);
    for (const auto& a : terms_) {
        for (const auto& b : o.terms_) {
            QSeries prod = (a.second * b.second).truncated(h);
            for (int i = 0; i < arity_; ++i)
                key[i] = a.first[i] + b.first[i];
            r.insert_add(key, prod);
        }
    }
    return r;
}

LaurentPoly LaurentPoly::term_multiplied(const ExpVec& e, const QSeries& c) const
{
    if (static_cast<int>(e.size()) != arity_)
        throw std::invalid_argument("LaurentPoly::term_multiplied: exponent arity mismatch");
    long long qc = static_cast<long long>(qceil_) + c.lo();
    LaurentPoly r(arity_,
                  qc >= QSeries::kExactCeiling ? QSeries::kExactCeiling : static_cast<int>(qc));
    ExpVec key(arity_);
    for (const auto& t : terms_) {
        for (int i = 0; i < arity_; ++i)
            key[i] = t.first[i] + e[i];
        r.insert_add(key, t.second * c);
    }
    return r;
}

LaurentPoly LaurentPoly::truncated(int qceil) const
{
    bool noop = qceil >= qceil_;
    for (auto it = terms_.begin(); noop && it != terms_.end(); ++it)
        noop = qceil >= it->second.hi();
    if (noop)
        return *this;
    LaurentPoly r(arity_, std::min(qceil, qceil_));
    for (const auto& t : terms_)
        r.insert_add(t.first, t.second.truncated(qceil));
    return r;
}

LaurentPoly LaurentPoly::substituted(int var, int sign, int qshift, const ExpVec& exps) const
{
    if (var < 0 || var >= arity_ || static_cast<int>(exps.size()) != arity_)
        throw std::invalid_argument("LaurentPoly::substituted: bad variable or image");
    if (sign != 1 && sign != -1)
        throw std::invalid_argument("LaurentPoly::substituted: sign must be +-1");
    bool injective = exps[var] != 0;
    if (!injective && qshift != 0)
        throw std::logic_error("LaurentPoly::substituted: non-injective q-shifting image");

    /* Stored windows shift exactly with their terms.  The absent-monomial
     * ceiling is carried through unchanged; for qshift != 0 this relies on
     * the caller's series keeping enough support that every absent term's
     * valuation absorbs the shift (the series generators here store a full
     * symmetric support radius, whose valuations grow superlinearly). */
    LaurentPoly r(arity_, qceil_);
    for (const auto& t : terms_) {
        int k = t.first[var];
        ExpVec ne = t.first;
        ne[var] = 0;
        for (int i = 0; i < arity_; ++i)
            ne[i] += k * exps[i];
        QSeries c = t.second.shifted(qshift * k);
        if (sign < 0 && (k & 1))
            c = -c;
        r.insert_add(ne, c);
    }
    if (!injective)
        r = r.truncated(r.qceil_);
    return r;
}

LaurentPoly LaurentPoly::var_set_to_one(int var) const
{
    if (var < 0 || var >= arity_)
        throw std::invalid_argument("LaurentPoly::var_set_to_one: bad variable");
    LaurentPoly r(arity_ - 1, qceil_);
    ExpVec ne(arity_ - 1);
    for (const auto& t : terms_) {
        int j = 0;
        for (int i = 0; i < arity_; ++i)
            if (i != var)
                ne[j++] = t.first[i];
        r.insert_add(ne, t.second);
    }
    return r.truncated(qceil_);
}

LaurentPoly LaurentPoly::embedded(int new_arity, const std::vector<int>& slots) const
{
    if (static_cast<int>(slots.size()) != arity_)
        throw std::invalid_argument("LaurentPoly::embedded: slot count mismatch");
    std::vector<bool> used(new_arity, false);
    for (int s : slots) {
        if (s < 0 || s >= new_arity || used[s])
            throw std::invalid_argument("LaurentPoly::embedded: slots must be distinct");
        used[s] = true;
    }
    LaurentPoly r(new_arity, qceil_);
    ExpVec ne(new_arity);
    for (const auto& t : terms_) {
        std::fill(ne.begin(), ne.end(), 0);
        for (int i = 0; i < arity_; ++i)
            ne[slots[i]] = t.first[i];
        r.insert_add(ne, t.second);
    }
    return r;
}

LaurentPoly LaurentPoly::symmetrized(bool with_sign) const
{
    LaurentPoly r(arity_, qceil_);
    std::vector<int> perm(arity_);
    for (int i = 0; i < arity_; ++i)
        perm[i] = i;
    ExpVec ne(arity_);
    do {
        int sgn = with_sign ? permutation_sign(perm) : 1;
        for (const auto& t : terms_) {
            for (int i = 0; i < arity_; ++i)
                ne[perm[i]] = t.first[i];
            r.insert_add(ne, sgn < 0 ? -t.second : t.second);
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return r;
}

namespace {

using DegLexMap = std::map<ExpVec, Rational, DegLexGreater>;

/* long division of a rational z-polynomial by c*(1 - w) along strictly
 * decreasing (total degree, lex) leading terms */
DegLexMap divide_by_binomial(DegLexMap work, const Rational& c, const ExpVec& w, int floor)
{
    DegLexMap quot;
    ExpVec zero(w.size(), 0);
    bool w_leads = DegLexGreater()(w, zero);
    size_t steps = 0;
    while (!work.empty()) {
        if (++steps > kDivisionGuard)
            throw NotDivisibleError("division did not terminate");
        auto it = work.begin();
        ExpVec t = it->first;
        Rational a = it->second;
        work.erase(it);
        if (a == 0)
            continue;
        if (total_degree(t) < floor)
            throw NotDivisibleError("working term fell below the degree floor");
        ExpVec u(t.size());
        if (w_leads) {
            /* eliminate t against the -c*w part */
            for (size_t i = 0; i < t.size(); ++i)
                u[i] = t[i] - w[i];
            quot[u] += -a / c;
            work[u] += a;
        } else {
            /* eliminate t against the c*1 part */
            quot[t] += a / c;
            for (size_t i = 0; i < t.size(); ++i)
                u[i] = t[i] + w[i];
            work[u] += a;
        }
    }
    return quot;
}

} // namespace

LaurentPoly LaurentPoly::divided_exact(const LaurentPoly& den, std::optional<int> floor) const
{
    check_arity(den);
    if (den.terms_.empty())
        throw InvalidDivisorError("divisor has no known terms");

    int vden = den.qval();
    std::map<ExpVec, Rational> low;
    for (const auto& t : den.terms_)
        if (t.second.lo() == vden)
            low[t.first] = t.second.coeff(vden);
    ExpVec zero(arity_, 0);
    if (low.size() != 2 || !low.count(zero))
        throw InvalidDivisorError("divisor's lowest q-order part is not c*(1 - w)");
    Rational c = low[zero];
    ExpVec w;
    for (const auto& t : low)
        if (t.first != zero)
            w = t.first;
    if (low[w] != -c)
        throw InvalidDivisorError("divisor's lowest q-order part is not c*(1 - w)");

    int vnum = qval();
    long long cq = std::min(static_cast<long long>(min_window()),
                            static_cast<long long>(den.min_window())
                                + std::min(0, vnum - vden))
                   - vden;
    int CQ = cq >= QSeries::kExactCeiling ? QSeries::kExactCeiling : static_cast<int>(cq);
    int floor_v = floor ? *floor : (terms_.empty() ? 0 : min_total_degree()) - 64;

    long long rceil = static_cast<long long>(CQ) + vden;
    int RC = rceil >= QSeries::kExactCeiling ? QSeries::kExactCeiling : static_cast<int>(rceil);

    LaurentPoly Q(arity_, CQ);
    LaurentPoly R = truncated(RC);
    while (true) {
        int rv = R.qval();
        if (R.terms_.empty() || rv >= RC)
            break;
        int d = rv - vden;
        DegLexMap P;
        for (const auto& t : R.terms_) {
            if (t.second.lo() > rv)
                continue;
            Rational a = t.second.coeff(rv);
            if (a != 0)
                P[t.first] = a;
        }
        DegLexMap T = divide_by_binomial(std::move(P), c, w, floor_v);
        LaurentPoly Td(arity_);
        for (const auto& t : T) {
            if (t.second == 0)
                continue;
            Q.insert_add(t.first, QSeries::monomial(t.second, d, CQ));
            Td.insert_add(t.first, QSeries::monomial(t.second, d));
        }
        R = (R - Td * den).truncated(RC);
        if (R.qval() <= rv)
            throw NotDivisibleError("remainder valuation failed to increase");
    }
    auto cert = R.zero_certificate(RC);
    if (!cert.zero)
        throw NotDivisibleError("nonzero remainder at q-order "
                                + std::to_string(cert.witness->second));
    return Q;
}

std::map<ExpVec, Rational> LaurentPoly::evaluated_at_q(const Rational& q0, int qorder) const
{
    std::map<ExpVec, Rational> out;
    for (const auto& t : terms_) {
        Rational v = t.second.truncated(qorder).evaluate(q0);
        if (v != 0)
            out[t.first] = v;
    }
    return out;
}

ZeroCertificate LaurentPoly::zero_certificate(int request) const
{
    ZeroCertificate cert;
    cert.certified = std::min(request, qceil_);
    for (const auto& t : terms_) {
        if (t.second.lo() < cert.certified) {
            cert.zero = false;
            if (!cert.witness || t.second.lo() < cert.witness->second)
                cert.witness = {t.first, t.second.lo()};
        }
    }
    return cert;
}

std::optional<PolyDifference> LaurentPoly::first_difference(const LaurentPoly& o) const
{
    check_arity(o);
    auto ia = terms_.begin(), ib = o.terms_.begin();
    while (ia != terms_.end() || ib != o.terms_.end()) {
        const ExpVec* key;
        if (ib == o.terms_.end() || (ia != terms_.end() && ia->first < ib->first))
            key = &ia->first;
        else if (ia == terms_.end() || ib->first < ia->first)
            key = &ib->first;
        else
            key = &ia->first;
        auto d = coeff(*key).first_difference(o.coeff(*key));
        if (d)
            return PolyDifference{*key, *d};
        if (ia != terms_.end() && ia->first == *key)
            ++ia;
        if (ib != o.terms_.end() && ib->first == *key)
            ++ib;
    }
    return std::nullopt;
}

int LaurentPoly::certified_common_window(const LaurentPoly& o) const
{
    check_arity(o);
    int w = std::min(qceil_, o.qceil_);
    bool any = false;
    for (const auto& t : terms_) {
        any = true;
        w = std::min(w, std::min(t.second.hi(), o.coeff(t.first).hi()));
    }
    for (const auto& t : o.terms_) {
        any = true;
        w = std::min(w, std::min(t.second.hi(), coeff(t.first).hi()));
    }
    if (!any)
        w = std::min(qceil_, o.qceil_);
    return w;
}

int LaurentPoly::min_total_degree() const
{
    int d = INT_MAX;
    for (const auto& t : terms_)
        d = std::min(d, total_degree(t.first));
    return terms_.empty() ? 0 : d;
}

int LaurentPoly::max_total_degree() const
{
    int d = INT_MIN;
    for (const auto& t : terms_)
        d = std::max(d, total_degree(t.first));
    return terms_.empty() ? 0 : d;
}

std::string LaurentPoly::to_string() const
{
    std::ostringstream os;
    if (terms_.empty())
        os << "0";
    bool first = true;
    for (const auto& t : terms_) {
        if (!first)
            os << " + ";
        first = false;
        os << "(" << t.second.to_string() << ")";
        for (int i = 0; i < arity_; ++i) {
            if (t.first[i] == 0)
                continue;
            os << "*z" << (i + 1);
            if (t.first[i] != 1)
                os << "^" << t.first[i];
        }
    }
    if (qceil_ < QSeries::kExactCeiling)
        os << "  [outside support: O(q^" << qceil_ << ")]";
    return os.str();
}

QSeries poly1_evaluated(const LaurentPoly& p, const Rational& z0)
{
    if (p.arity() != 1)
        throw std::invalid_argument("poly1_evaluated: arity must be 1");
    QSeries acc = QSeries::zero(p.qceil());
    for (const auto& t : p.terms())
        acc += t.second.scaled(rational_pow(z0, t.first[0]));
    return acc;
}

} // namespace flatdeform
