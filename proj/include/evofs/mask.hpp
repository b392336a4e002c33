#pragma once

#include <cstdint>
#include <vector>

namespace evofs {

// Binary feature mask; one byte per feature, values 0/1.
using Mask = std::vector<std::uint8_t>;

inline int popcount(const Mask& m) {
    int n = 0;
    for (std::uint8_t b : m) n += b;
    return n;
}

inline std::vector<int> selected_indices(const Mask& m) {
    std::vector<int> out;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i]) out.push_back(static_cast<int>(i));
    }
    return out;
}

inline Mask mask_from_indices(const std::vector<int>& indices, std::size_t dim) {
    Mask m(dim, 0);
    for (int i : indices) m[static_cast<std::size_t>(i)] = 1;
    return m;
}

}  // namespace evofs
