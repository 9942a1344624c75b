#include "relaxlab/isotonic.hpp"

#include <cstddef>
#include <vector>

namespace relaxlab {

void isotonic_increasing(std::span<double> y) {
    struct Block {
        double mean;
        std::size_t count;
    };
    std::vector<Block> stack;
    stack.reserve(y.size());
    for (double v : y) {
        stack.push_back({v, 1});
        // merge while the last two blocks violate the ordering
        while (stack.size() > 1 && stack[stack.size() - 2].mean > stack.back().mean) {
            const Block top = stack.back();
            stack.pop_back();
            Block& prev = stack.back();
            const std::size_t cnt = prev.count + top.count;
            prev.mean = (prev.mean * static_cast<double>(prev.count) +
                         top.mean * static_cast<double>(top.count)) /
                        static_cast<double>(cnt);
            prev.count = cnt;
        }
    }
    std::size_t i = 0;
    for (const Block& b : stack) {
        for (std::size_t c = 0; c < b.count; ++c) y[i++] = b.mean;
    }
}

void isotonic_decreasing(std::span<double> y) {
    for (double& v : y) v = -v;
    isotonic_increasing(y);
    for (double& v : y) v = -v;
}

}  // namespace relaxlab
