#include "incnet/combinatorics.hpp"

#include <stdexcept>

namespace incnet {

std::int64_t binomial(int n, int k) {
    if (k < 0 || k > n || n < 0) return 0;
    if (k > n - k) k = n - k;
    std::int64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

std::int64_t falling_factorial(int n, int k) {
    if (k < 0) throw std::range_error("falling_factorial: negative length");
    if (k > n) return 0;
    std::int64_t r = 1;
    for (int i = 0; i < k; ++i) r *= n - i;
    return r;
}

std::int64_t factorial(int n) {
    if (n < 0 || n > 20) throw std::range_error("factorial: out of exact int64 range");
    std::int64_t r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

} // namespace incnet
