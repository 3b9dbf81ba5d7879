#pragma once

#include <cstdint>

namespace incnet {

// Exact small-range helpers; arguments stay far below overflow at the node
// counts this library targets.
std::int64_t binomial(int n, int k);
std::int64_t falling_factorial(int n, int k); // n (n-1) ... (n-k+1)
std::int64_t factorial(int n);

} // namespace incnet
