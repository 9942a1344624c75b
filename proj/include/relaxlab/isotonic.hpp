#pragma once

#include <span>

namespace relaxlab {

/// In-place least-squares projection onto nondecreasing sequences (pool adjacent violators).
void isotonic_increasing(std::span<double> y);
/// In-place least-squares projection onto nonincreasing sequences.
void isotonic_decreasing(std::span<double> y);

}  // namespace relaxlab
