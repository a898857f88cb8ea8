#pragma once

#include <gmpxx.h>
#include <stdexcept>
#include <string>
#include <string_view>

namespace flatdeform {

/* Exact rational scalars.  GMP already keeps mpq_class canonical
 * (gcd(num,den)=1, den>0), which is exactly the invariant we need, so the
 * engine uses it directly and only adds parsing/printing/power helpers. */
using Rational = mpq_class;
using Integer = mpz_class;

inline Rational rational_from_string(std::string_view s)
{
    if (s.empty())
        throw std::invalid_argument("rational: empty string");
    mpq_class r;
    if (r.set_str(std::string(s), 10) != 0)
        throw std::invalid_argument("rational: cannot parse '" + std::string(s) + "'");
    if (r.get_den() == 0)
        throw std::invalid_argument("rational: zero denominator in '" + std::string(s) + "'");
    r.canonicalize();
    return r;
}

/* "p/q", or just "p" when the denominator is 1.  No decimals anywhere. */
inline std::string rational_to_string(const Rational& r)
{
    return r.get_str();
}

/* r^e for e of either sign; 0^negative is rejected. */
inline Rational rational_pow(const Rational& r, long e)
{
    if (e == 0)
        return Rational(1);
    if (r == 0) {
        if (e < 0)
            throw std::domain_error("rational_pow: zero to a negative power");
        return Rational(0);
    }
    unsigned long a = static_cast<unsigned long>(e < 0 ? -e : e);
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), r.get_num().get_mpz_t(), a);
    mpz_pow_ui(den.get_mpz_t(), r.get_den().get_mpz_t(), a);
    Rational out;
    if (e > 0) {
        out = Rational(num, den);
    } else {
        out = Rational(den, num);
    }
    out.canonicalize();
    return out;
}

} // namespace flatdeform
