#include <flatdeform/check.hpp>

#include <sstream>

namespace flatdeform {

std::string CheckItem::describe() const
{
    std::ostringstream os;
    os << name << ": " << (pass ? "pass" : "FAIL") << " (window " << certified << ")";
    if (offender) {
        os << " first offender q^" << offender->qexp << " at z^(";
        for (size_t i = 0; i < offender->exps.size(); ++i)
            os << (i ? "," : "") << offender->exps[i];
        os << ")";
    }
    return os.str();
}

void CheckReport::raise_if_failed() const
{
    for (const auto& it : items)
        if (!it.pass)
            throw CheckFailed(it.describe());
}

CheckItem check_equal(const std::string& name, const LaurentPoly& lhs, const LaurentPoly& rhs,
                      int request)
{
    CheckItem it;
    it.name = name;
    it.certified = std::min(request, lhs.certified_common_window(rhs));
    auto zc = (lhs - rhs).zero_certificate(it.certified);
    it.pass = zc.zero;
    if (!zc.zero)
        it.offender = PolyDifference{zc.witness->first, zc.witness->second};
    return it;
}

CheckItem check_zero(const std::string& name, const LaurentPoly& p, int request)
{
    CheckItem it;
    it.name = name;
    it.certified = std::min(request, p.min_window());
    auto zc = p.zero_certificate(it.certified);
    it.pass = zc.zero;
    if (!zc.zero)
        it.offender = PolyDifference{zc.witness->first, zc.witness->second};
    return it;
}

} // namespace flatdeform
