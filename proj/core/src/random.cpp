#include "elastica/random.hpp"

#include <cmath>

namespace elastica {

double NormalStream::operator()() noexcept {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    double u = 0.0;
    double v = 0.0;
    double s = 0.0;
    do {
        u = 2.0 * rng_.uniform_open() - 1.0;
        v = 2.0 * rng_.uniform_open() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    cached_ = v * factor;
    has_cached_ = true;
    return u * factor;
}

}  // namespace elastica
