#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace dpc {

// Bits are carried one per byte (values 0/1) in block order; within a symbol
// the first bit is the most significant.
inline std::vector<int> bits_to_symbols(const std::vector<std::uint8_t>& bits, int bits_per_symbol) {
    if (bits_per_symbol < 1 || bits.size() % static_cast<std::size_t>(bits_per_symbol) != 0) {
        throw std::invalid_argument("bit count is not a multiple of bits per symbol");
    }
    std::vector<int> symbols(bits.size() / bits_per_symbol);
    std::size_t k = 0;
    for (auto& sym : symbols) {
        int v = 0;
        for (int b = 0; b < bits_per_symbol; ++b) {
            v = (v << 1) | (bits[k++] & 1);
        }
        sym = v;
    }
    return symbols;
}

inline std::vector<std::uint8_t> symbols_to_bits(const std::vector<int>& symbols, int bits_per_symbol) {
    std::vector<std::uint8_t> bits(symbols.size() * bits_per_symbol);
    std::size_t k = 0;
    for (int sym : symbols) {
        for (int b = bits_per_symbol - 1; b >= 0; --b) {
            bits[k++] = static_cast<std::uint8_t>((sym >> b) & 1);
        }
    }
    return bits;
}

}  // namespace dpc
