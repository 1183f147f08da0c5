#include "hartogs/special.hpp"

#include <cmath>
#include <vector>

namespace hartogs {

double log_gamma_int(long long n) {
    static constexpr long long kTableSize = 1 << 14;
    static const std::vector<double> table = [] {
        std::vector<double> t(kTableSize);
        t[1] = 0.0;
        for (long long i = 2; i < kTableSize; ++i) t[i] = t[i - 1] + std::log(double(i - 1));
        return t;
    }();
    if (n < 1) throw DomainError("log_gamma_int requires n >= 1");
    if (n < kTableSize) return table[n];
    return std::lgamma(double(n));
}

} // namespace hartogs
