#include <flatdeform/qseries.hpp>

#include <sstream>
#include <stdexcept>

namespace flatdeform {

void QSeries::normalize()
{
    size_t b = 0, e = c_.size();
    while (b < e && c_[b] == 0)
        ++b;
    while (e > b && c_[e - 1] == 0)
        --e;
    if (b == e) {
        c_.clear();
        lo_ = hi_;
        return;
    }
    if (b > 0 || e < c_.size()) {
        std::vector<Rational> t(c_.begin() + b, c_.begin() + e);
        c_ = std::move(t);
        lo_ += static_cast<int>(b);
    }
}

QSeries QSeries::zero(int ceiling)
{
    QSeries s;
    s.lo_ = s.hi_ = ceiling;
    return s;
}

QSeries QSeries::constant(const Rational& c)
{
    return monomial(c, 0, kExactCeiling);
}

QSeries QSeries::monomial(const Rational& c, int e, int ceiling)
{
    if (c == 0 || e >= ceiling)
        return zero(ceiling);
    QSeries s;
    s.lo_ = e;
    s.hi_ = ceiling;
    s.c_ = {c};
    return s;
}

QSeries QSeries::dense(int lo, std::vector<Rational> coeffs, int hi)
{
    if (lo + static_cast<long long>(coeffs.size()) > hi)
        throw std::invalid_argument("QSeries::dense: storage exceeds ceiling");
    QSeries s;
    s.lo_ = lo;
    s.hi_ = hi;
    s.c_ = std::move(coeffs);
    s.normalize();
    return s;
}

const Rational& QSeries::coeff(int e) const
{
    static const Rational kZero(0);
    if (e >= hi_)
        throw std::logic_error("QSeries::coeff: exponent beyond knowledge ceiling");
    if (e < lo_ || e >= lo_ + static_cast<int>(c_.size()))
        return kZero;
    return c_[e - lo_];
}

QSeries QSeries::operator-() const
{
    QSeries s(*this);
    for (auto& x : s.c_)
        x = -x;
    return s;
}

QSeries QSeries::operator+(const QSeries& o) const
{
    int h = std::min(hi_, o.hi_);
    int l = std::min(lo_, o.lo_);
    if (l >= h)
        return zero(h);
    /* storage spans only the union of stored ranges; [top, h) is an
     * implicit known-zero tail */
    int top = l;
    if (!c_.empty())
        top = std::max(top, lo_ + static_cast<int>(c_.size()));
    if (!o.c_.empty())
        top = std::max(top, o.lo_ + static_cast<int>(o.c_.size()));
    top = std::min(top, h);
    QSeries s;
    s.lo_ = l;
    s.hi_ = h;
    s.c_.assign(static_cast<size_t>(top - l), Rational(0));
    auto acc = [&](const QSeries& a) {
        int at = std::min(top, a.lo_ + static_cast<int>(a.c_.size()));
        for (int e = a.lo_; e < at; ++e)
            s.c_[e - l] += a.c_[e - a.lo_];
    };
    acc(*this);
    acc(o);
    s.normalize();
    return s;
}

QSeries QSeries::operator-(const QSeries& o) const
{
    return *this + (-o);
}

QSeries QSeries::operator*(const QSeries& o) const
{
    long long hl = std::min(static_cast<long long>(lo_) + o.hi_,
                            static_cast<long long>(o.lo_) + hi_);
    int h = clamp_ceiling(hl);
    if (is_zero() || o.is_zero())
        return zero(h);
    long long l = static_cast<long long>(lo_) + o.lo_;
    if (l >= h)
        return zero(h);
    long long top = std::min<long long>(h, l + static_cast<long long>(c_.size())
                                               + static_cast<long long>(o.c_.size()) - 1);
    QSeries s;
    s.lo_ = static_cast<int>(l);
    s.hi_ = h;
    s.c_.assign(static_cast<size_t>(top - l), Rational(0));
    int na = static_cast<int>(c_.size()), nb = static_cast<int>(o.c_.size());
    for (int i = 0; i < na; ++i) {
        if (c_[i] == 0)
            continue;
        long long base = static_cast<long long>(lo_) + i + o.lo_;
        for (int j = 0; j < nb; ++j) {
            long long e = base + j;
            if (e >= h)
                break;
            if (o.c_[j] != 0)
                s.c_[static_cast<size_t>(e - l)] += c_[i] * o.c_[j];
        }
    }
    s.normalize();
    return s;
}

QSeries QSeries::scaled(const Rational& c) const
{
    if (c == 0)
        return zero(hi_);
    QSeries s(*this);
    for (auto& x : s.c_)
        x *= c;
    return s;
}

QSeries QSeries::shifted(int k) const
{
    QSeries s(*this);
    s.lo_ = clamp_ceiling(static_cast<long long>(lo_) + k);
    s.hi_ = clamp_ceiling(static_cast<long long>(hi_) + k);
    return s;
}

QSeries QSeries::truncated(int ceiling) const
{
    if (ceiling >= hi_)
        return *this;
    QSeries s;
    s.hi_ = ceiling;
    if (lo_ >= ceiling) {
        s.lo_ = ceiling;
        return s;
    }
    s.lo_ = lo_;
    int keep = std::min<int>(static_cast<int>(c_.size()), ceiling - lo_);
    s.c_.assign(c_.begin(), c_.begin() + keep);
    s.normalize();
    return s;
}

std::optional<int> QSeries::first_difference(const QSeries& o) const
{
    int h = std::min(hi_, o.hi_);
    int l = std::min(lo_, o.lo_);
    /* beyond both stored ranges everything is known zero */
    int top = l;
    if (!c_.empty())
        top = std::max(top, lo_ + static_cast<int>(c_.size()));
    if (!o.c_.empty())
        top = std::max(top, o.lo_ + static_cast<int>(o.c_.size()));
    h = std::min(h, top);
    for (int e = l; e < h; ++e) {
        bool ka = e >= lo_ + static_cast<int>(c_.size()) || e < lo_;
        bool kb = e >= o.lo_ + static_cast<int>(o.c_.size()) || e < o.lo_;
        Rational a = ka ? Rational(0) : c_[e - lo_];
        Rational b = kb ? Rational(0) : o.c_[e - o.lo_];
        if (a != b)
            return e;
    }
    return std::nullopt;
}

QSeries QSeries::unit_div(const QSeries& d, int order_cap) const
{
    if (d.is_zero())
        throw std::invalid_argument("QSeries::unit_div: zero divisor");
    int dlo = d.lo_;
    if (d.c_[0] == 0)
        throw std::invalid_argument("QSeries::unit_div: divisor not in leading form");
    if (is_zero())
        return zero(clamp_ceiling(std::min<long long>(
            static_cast<long long>(hi_) - dlo, order_cap)));
    long long len = std::min(static_cast<long long>(hi_) - lo_,
                             static_cast<long long>(d.hi_) - dlo);
    int slo = lo_ - dlo;
    int shi = clamp_ceiling(std::min<long long>(slo + len, order_cap));
    if (shi <= slo)
        return zero(shi);
    const Rational& d0 = d.c_[0];
    std::vector<Rational> s(shi - slo);
    for (int e = slo; e < shi; ++e) {
        Rational acc = coeff(e + dlo);
        for (int j = slo; j < e; ++j)
            acc -= s[j - slo] * d.coeff(e - j + dlo);
        s[e - slo] = acc / d0;
    }
    return dense(slo, std::move(s), shi);
}

Rational QSeries::evaluate(const Rational& q0) const
{
    Rational acc(0);
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0)
            continue;
        int e = lo_ + static_cast<int>(i);
        if (q0 == 0) {
            if (e < 0)
                throw std::domain_error("QSeries::evaluate: negative power at q=0");
            if (e == 0)
                acc += c_[i];
            continue;
        }
        acc += c_[i] * rational_pow(q0, e);
    }
    return acc;
}

std::string QSeries::to_string() const
{
    std::ostringstream os;
    if (is_zero()) {
        os << "0";
    } else {
        bool first = true;
        for (size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == 0)
                continue;
            int e = lo_ + static_cast<int>(i);
            Rational a = c_[i];
            if (first) {
                if (a < 0) {
                    os << "-";
                    a = -a;
                }
            } else {
                os << (a < 0 ? " - " : " + ");
                if (a < 0)
                    a = -a;
            }
            first = false;
            if (e == 0) {
                os << rational_to_string(a);
            } else {
                if (a != 1)
                    os << rational_to_string(a) << "*";
                os << "q";
                if (e != 1)
                    os << "^" << e;
            }
        }
    }
    if (!is_exact())
        os << " + O(q^" << hi_ << ")";
    return os.str();
}

} // namespace flatdeform
