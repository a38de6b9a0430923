#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "dpc/constellation.hpp"

namespace dpc {

enum class TrellisPreset {
    Pam8_8State_R0_2,
    Qam16_8State_R0_3,
    Qam8_4State_R0_2,
    Qam8_8State_R0_2,
    Qam4_4State_R0_2_Awgn,
};

const char* to_string(TrellisPreset preset);
std::optional<TrellisPreset> parse_preset(std::string_view name);
ConstellationKind preset_constellation(TrellisPreset preset);

struct TrellisEdge {
    int next_state;
    int label;
};

// State-transition structure with one signal label per edge. Edges from a
// state are indexed 0..2^r0-1; the index is the wire format used by the plain
// encoder (edge index bits, most significant first) and by bin schemes.
struct TrellisCode {
    TrellisPreset preset{};
    int num_states = 0;
    int r0 = 0;  // log2 of edges per state
    std::vector<std::vector<TrellisEdge>> edges;  // [state][edge]
    std::vector<int> subset_rank;  // [label] -> position in the coset order used by coset-split binning
    Constellation constellation;

    int edges_per_state() const { return 1 << r0; }
};

TrellisCode build_trellis(TrellisPreset preset, const Constellation& c);

enum class BinStrategy { PairedMaxSpread, PairedMinSpread, CosetSplit, Unit };

const char* to_string(BinStrategy strategy);
std::optional<BinStrategy> parse_bin_strategy(std::string_view name);

// Per-state partition of the edge set into 2^r bins of 2^(r0-r) edges. The
// message symbol picks the bin; the encoder picks the edge within the bin.
struct BinScheme {
    int r = 0;
    BinStrategy strategy{};
    std::vector<std::vector<std::vector<int>>> bins;  // [state][bin] -> edge indices
    std::vector<std::vector<int>> bin_of;             // [state][edge] -> bin index
};

// Requires 1 <= r < t.r0. Deterministic for a fixed strategy: the grouping
// search enumerates candidate partitions in lexicographic order and keeps the
// first optimum; bins are numbered by their smallest edge index (coset-split
// bins by subset rank order).
BinScheme build_bins(const TrellisCode& t, int r, BinStrategy strategy);

// Degenerate scheme with one edge per bin (r = r0): plain TCM, where the
// message symbol is the edge index itself.
BinScheme unit_bins(const TrellisCode& t);

// Full scheme parameterization. alpha is the presubtraction fraction.
struct DpcSpec {
    TrellisCode trellis;
    BinScheme bins;
    double alpha = 0.0;

    const Constellation& constellation() const { return trellis.constellation; }
    double design_power() const { return trellis.constellation.avg_power; }
    int r() const { return bins.r; }
    int r0() const { return trellis.r0; }
};

// Builds constellation + trellis + bins in one step. r == r0 yields unit bins
// (the plain-TCM baseline path); r < r0 uses build_bins.
DpcSpec make_spec(TrellisPreset preset, double design_power, int r, BinStrategy strategy,
                  double alpha);

// Every label sequence realizable by a trellis walk from start_state whose
// step-i edge lies in the bin selected by message symbol i. Oracle-scale only:
// n must be <= 12. Sequences come out in lexicographic edge-path order.
std::vector<std::vector<int>> enumerate_valid_codewords(const DpcSpec& spec,
                                                        const std::vector<std::uint8_t>& message,
                                                        int n, int start_state);

}  // namespace dpc
