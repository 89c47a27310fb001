#pragma once

#include <functional>

namespace tvcqed::numerics {

// Bisection on [lo, hi] until |hi - lo| <= tol * |root|. Throws BracketError when f(lo) and f(hi)
// have the same sign.
double find_root_bracketed(const std::function<double(double)>& f, double lo, double hi,
                           double tol = 1e-12);

}  // namespace tvcqed::numerics
