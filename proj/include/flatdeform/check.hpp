#pragma once

#include <flatdeform/laurent.hpp>

#include <string>
#include <vector>

namespace flatdeform {

struct CheckFailed : std::runtime_error {
    explicit CheckFailed(const std::string& what) : std::runtime_error(what) {}
};

/* One verified statement: pass/fail plus the q-window the verification
 * actually certifies, and the first offending term on failure. */
struct CheckItem {
    std::string name;
    bool pass = false;
    int certified = 0;
    std::optional<PolyDifference> offender;

    std::string describe() const;
};

struct CheckReport {
    std::vector<CheckItem> items;

    bool all_pass() const
    {
        for (const auto& it : items)
            if (!it.pass)
                return false;
        return true;
    }

    /* throw CheckFailed naming the first failing item */
    void raise_if_failed() const;
};

/* compare two polynomials up to min(request, their common certified window) */
CheckItem check_equal(const std::string& name, const LaurentPoly& lhs, const LaurentPoly& rhs,
                      int request);

/* assert a polynomial vanishes up to min(request, its certified window) */
CheckItem check_zero(const std::string& name, const LaurentPoly& p, int request);

} // namespace flatdeform
