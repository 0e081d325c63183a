#pragma once

#include <cstddef>

namespace gibbs {

/// Default refusal threshold for enumerations (tree leaves, periodic points).
inline constexpr std::size_t kDefaultEnumerationCap = 10'000'000;

}  // namespace gibbs
