#pragma once

#include <cmath>
#include <utility>

#include "error.hpp"

namespace nfamb {

/// Bisection for a sign change of f on [lo, hi]; stops when the bracket is below tol.
template <typename F>
double bisect(F&& f, double lo, double hi, double tol, int max_iter = 400)
{
    double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0.0)
        return lo;
    if (fhi == 0.0)
        return hi;
    if ((flo < 0.0) == (fhi < 0.0))
        throw ComputationError("bisect: root not bracketed");
    for (int i = 0; i < max_iter && (hi - lo) > tol; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0)
            return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace nfamb
