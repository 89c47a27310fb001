#include "tvcqed/numerics/roots.hpp"

#include <cmath>
#include <sstream>

#include "tvcqed/errors.hpp"

namespace tvcqed::numerics {

double find_root_bracketed(const std::function<double(double)>& f, double lo, double hi, double tol) {
    if (!(tol > 0.0)) throw ValidationError("find_root_bracketed: tol must be positive");
    if (lo > hi) std::swap(lo, hi);
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (std::signbit(flo) == std::signbit(fhi) || std::isnan(flo) || std::isnan(fhi)) {
        std::ostringstream msg;
        msg << "no sign change on bracket [" << lo << ", " << hi << "]: f(lo)=" << flo
            << ", f(hi)=" << fhi;
        throw BracketError(msg.str());
    }
    for (int iter = 0; iter < 2000; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo <= tol * std::abs(mid) || mid == lo || mid == hi) return mid;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (std::signbit(fm) == std::signbit(flo)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace tvcqed::numerics
