#include "dpc/trellis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "dpc/bits.hpp"

namespace dpc {
namespace {

// Level-3 coset pairs of the 16-QAM map, in the coset order used for
// subset ranking; entry d pairs with entry d+4 across the orthogonal diagonal.
constexpr int kQam16CosetPairs[8][2] = {
    {0, 10}, {6, 12}, {5, 15}, {3, 9}, {8, 2}, {4, 14}, {7, 13}, {1, 11},
};

// 8-state core: state index 4p+2q+r, branch bits (y1, y2).
// next(p,q,r; y1,y2) = (q^y1, r^y2, p), coset index d = 4*y2 + 2*y1 + p.
// This realizes the parity check y0[t] = y0[t-3] ^ y1[t-1] ^ y2[t-2] as a pure
// transition table; out-edges of a state stay inside one level-1 coset.
int next8(int state, int y1, int y2) {
    const int p = (state >> 2) & 1;
    const int q = (state >> 1) & 1;
    const int r = state & 1;
    return 4 * (q ^ y1) + 2 * (r ^ y2) + p;
}

int coset8(int state, int y1, int y2) {
    const int p = (state >> 2) & 1;
    return 4 * y2 + 2 * y1 + p;
}

// 4-state core: state index 2a+b, input bit m.
// next(a,b; m) = (m, a), coset index c = 2*(m^b) + a.
int next4(int state, int m) {
    const int a = (state >> 1) & 1;
    return 2 * m + a;
}

int coset4(int state, int m) {
    const int a = (state >> 1) & 1;
    const int b = state & 1;
    return 2 * (m ^ b) + a;
}

double edge_sq_distance(const TrellisCode& t, int label_a, int label_b) {
    return std::norm(t.constellation.points[label_a] - t.constellation.points[label_b]);
}

// Enumerates all partitions of `edges` into groups of size `group_size`, in
// lexicographic order (each group anchored by the smallest unassigned edge),
// and reports each to `visit`.
void for_each_grouping(const std::vector<int>& edges, int group_size,
                       std::vector<std::vector<int>>& current, std::vector<bool>& used,
                       const std::function<void(const std::vector<std::vector<int>>&)>& visit) {
    const int n = static_cast<int>(edges.size());
    int anchor = -1;
    for (int i = 0; i < n; ++i) {
        if (!used[i]) {
            anchor = i;
            break;
        }
    }
    if (anchor < 0) {
        visit(current);
        return;
    }
    used[anchor] = true;
    std::vector<int> pick(group_size - 1);
    std::vector<int> free_idx;
    for (int i = anchor + 1; i < n; ++i) {
        if (!used[i]) free_idx.push_back(i);
    }
    const int f = static_cast<int>(free_idx.size());
    for (int i = 0; i < group_size - 1; ++i) pick[i] = i;
    for (;;) {
        std::vector<int> group = {edges[anchor]};
        for (int i : pick) {
            group.push_back(edges[free_idx[i]]);
            used[free_idx[i]] = true;
        }
        current.push_back(group);
        for_each_grouping(edges, group_size, current, used, visit);
        current.pop_back();
        for (int i : pick) used[free_idx[i]] = false;

        int k = group_size - 2;
        while (k >= 0 && pick[k] == f - (group_size - 1 - k)) --k;
        if (k < 0) break;
        ++pick[k];
        for (int i = k + 1; i < group_size - 1; ++i) pick[i] = pick[i - 1] + 1;
    }
    used[anchor] = false;
}

}  // namespace

const char* to_string(TrellisPreset preset) {
    switch (preset) {
        case TrellisPreset::Pam8_8State_R0_2: return "pam8_8state_r0_2";
        case TrellisPreset::Qam16_8State_R0_3: return "qam16_8state_r0_3";
        case TrellisPreset::Qam8_4State_R0_2: return "qam8_4state_r0_2";
        case TrellisPreset::Qam8_8State_R0_2: return "qam8_8state_r0_2";
        case TrellisPreset::Qam4_4State_R0_2_Awgn: return "qam4_4state_r0_2_awgn";
    }
    return "?";
}

std::optional<TrellisPreset> parse_preset(std::string_view name) {
    if (name == "pam8_8state_r0_2") return TrellisPreset::Pam8_8State_R0_2;
    if (name == "qam16_8state_r0_3") return TrellisPreset::Qam16_8State_R0_3;
    if (name == "qam8_4state_r0_2") return TrellisPreset::Qam8_4State_R0_2;
    if (name == "qam8_8state_r0_2") return TrellisPreset::Qam8_8State_R0_2;
    if (name == "qam4_4state_r0_2_awgn") return TrellisPreset::Qam4_4State_R0_2_Awgn;
    return std::nullopt;
}

ConstellationKind preset_constellation(TrellisPreset preset) {
    switch (preset) {
        case TrellisPreset::Pam8_8State_R0_2: return ConstellationKind::Pam8;
        case TrellisPreset::Qam16_8State_R0_3: return ConstellationKind::Qam16;
        case TrellisPreset::Qam8_4State_R0_2: return ConstellationKind::Qam8;
        case TrellisPreset::Qam8_8State_R0_2: return ConstellationKind::Qam8;
        case TrellisPreset::Qam4_4State_R0_2_Awgn: return ConstellationKind::Qam4;
    }
    throw std::invalid_argument("unknown trellis preset");
}

TrellisCode build_trellis(TrellisPreset preset, const Constellation& c) {
    if (c.kind != preset_constellation(preset)) {
        throw std::invalid_argument("constellation kind does not match trellis preset");
    }
    TrellisCode t;
    t.preset = preset;
    t.constellation = c;

    switch (preset) {
        case TrellisPreset::Pam8_8State_R0_2:
        case TrellisPreset::Qam8_8State_R0_2:
            // 4 edges per state, edge index 2*y2 + y1, label = coset index.
            t.num_states = 8;
            t.r0 = 2;
            t.edges.assign(8, {});
            for (int s = 0; s < 8; ++s) {
                for (int e = 0; e < 4; ++e) {
                    const int y1 = e & 1;
                    const int y2 = (e >> 1) & 1;
                    t.edges[s].push_back({next8(s, y1, y2), coset8(s, y1, y2)});
                }
            }
            break;
        case TrellisPreset::Qam16_8State_R0_3:
            // 8 edges per state, edge index 4*y2 + 2*y1 + y3; the branch bits
            // (y1, y2) pick the coset pair, y3 picks the point inside it
            // (parallel transition).
            t.num_states = 8;
            t.r0 = 3;
            t.edges.assign(8, {});
            for (int s = 0; s < 8; ++s) {
                for (int e = 0; e < 8; ++e) {
                    const int y3 = e & 1;
                    const int y1 = (e >> 1) & 1;
                    const int y2 = (e >> 2) & 1;
                    const int d = coset8(s, y1, y2);
                    t.edges[s].push_back({next8(s, y1, y2), kQam16CosetPairs[d][y3]});
                }
            }
            break;
        case TrellisPreset::Qam8_4State_R0_2:
            // 4 edges per state, edge index 2*y1 + y2; y1 is the branch bit,
            // y2 the parallel bit selecting within the level-2 coset {c, c+4}.
            t.num_states = 4;
            t.r0 = 2;
            t.edges.assign(4, {});
            for (int s = 0; s < 4; ++s) {
                for (int e = 0; e < 4; ++e) {
                    const int y2 = e & 1;
                    const int y1 = (e >> 1) & 1;
                    t.edges[s].push_back({next4(s, y1), 4 * y2 + coset4(s, y1)});
                }
            }
            break;
        case TrellisPreset::Qam4_4State_R0_2_Awgn:
            // Interference-free baseline code: 2 edges per state, one message
            // bit per symbol, label = coset index.
            t.num_states = 4;
            t.r0 = 1;
            t.edges.assign(4, {});
            for (int s = 0; s < 4; ++s) {
                for (int m = 0; m < 2; ++m) {
                    t.edges[s].push_back({next4(s, m), coset4(s, m)});
                }
            }
            break;
    }

    const int m = c.size();
    t.subset_rank.assign(m, 0);
    if (preset == TrellisPreset::Qam16_8State_R0_3) {
        for (int d = 0; d < 8; ++d) {
            for (int j = 0; j < 2; ++j) {
                t.subset_rank[kQam16CosetPairs[d][j]] = 2 * d + j;
            }
        }
    } else {
        for (int l = 0; l < m; ++l) t.subset_rank[l] = l;
    }
    return t;
}

const char* to_string(BinStrategy strategy) {
    switch (strategy) {
        case BinStrategy::PairedMaxSpread: return "paired-max-spread";
        case BinStrategy::PairedMinSpread: return "paired-min-spread";
        case BinStrategy::CosetSplit: return "coset-split";
        case BinStrategy::Unit: return "unit";
    }
    return "?";
}

std::optional<BinStrategy> parse_bin_strategy(std::string_view name) {
    if (name == "paired-max-spread") return BinStrategy::PairedMaxSpread;
    if (name == "paired-min-spread") return BinStrategy::PairedMinSpread;
    if (name == "coset-split") return BinStrategy::CosetSplit;
    if (name == "unit") return BinStrategy::Unit;
    return std::nullopt;
}

BinScheme build_bins(const TrellisCode& t, int r, BinStrategy strategy) {
    if (r < 1 || r >= t.r0) {
        throw std::invalid_argument("bin scheme requires 1 <= r < r0");
    }
    if (strategy == BinStrategy::Unit) {
        throw std::invalid_argument("unit bins are built with unit_bins()");
    }
    const int num_bins = 1 << r;
    const int group_size = 1 << (t.r0 - r);

    BinScheme scheme;
    scheme.r = r;
    scheme.strategy = strategy;
    scheme.bins.assign(t.num_states, {});
    scheme.bin_of.assign(t.num_states, std::vector<int>(t.edges_per_state(), -1));

    std::vector<int> all_edges(t.edges_per_state());
    for (std::size_t e = 0; e < all_edges.size(); ++e) all_edges[e] = static_cast<int>(e);

    for (int s = 0; s < t.num_states; ++s) {
        std::vector<std::vector<int>> chosen;
        if (strategy == BinStrategy::CosetSplit) {
            std::vector<int> order = all_edges;
            std::sort(order.begin(), order.end(), [&](int a, int b) {
                const int ra = t.subset_rank[t.edges[s][a].label];
                const int rb = t.subset_rank[t.edges[s][b].label];
                return ra != rb ? ra < rb : a < b;
            });
            for (int bin = 0; bin < num_bins; ++bin) {
                chosen.emplace_back(order.begin() + bin * group_size,
                                    order.begin() + (bin + 1) * group_size);
            }
        } else {
            // Exhaustive grouping search; min-spread packs the closest labels
            // together, max-spread pushes the farthest labels together.
            const bool max_spread = strategy == BinStrategy::PairedMaxSpread;
            double best_obj = max_spread ? -1.0 : std::numeric_limits<double>::infinity();
            std::vector<std::vector<int>> current;
            std::vector<bool> used(all_edges.size(), false);
            for_each_grouping(all_edges, group_size, current, used,
                              [&](const std::vector<std::vector<int>>& groups) {
                                  double obj = max_spread
                                                   ? std::numeric_limits<double>::infinity()
                                                   : 0.0;
                                  for (const auto& g : groups) {
                                      for (std::size_t i = 0; i < g.size(); ++i) {
                                          for (std::size_t j = i + 1; j < g.size(); ++j) {
                                              const double d = edge_sq_distance(
                                                  t, t.edges[s][g[i]].label, t.edges[s][g[j]].label);
                                              obj = max_spread ? std::min(obj, d) : std::max(obj, d);
                                          }
                                      }
                                  }
                                  const bool better = max_spread ? obj > best_obj : obj < best_obj;
                                  if (better) {
                                      best_obj = obj;
                                      chosen = groups;
                                  }
                              });
        }
        for (auto& bin : chosen) std::sort(bin.begin(), bin.end());
        scheme.bins[s] = std::move(chosen);
        for (int bin = 0; bin < num_bins; ++bin) {
            for (int e : scheme.bins[s][bin]) scheme.bin_of[s][e] = bin;
        }
    }
    return scheme;
}

BinScheme unit_bins(const TrellisCode& t) {
    BinScheme scheme;
    scheme.r = t.r0;
    scheme.strategy = BinStrategy::Unit;
    scheme.bins.assign(t.num_states, {});
    scheme.bin_of.assign(t.num_states, std::vector<int>(t.edges_per_state(), -1));
    for (int s = 0; s < t.num_states; ++s) {
        for (int e = 0; e < t.edges_per_state(); ++e) {
            scheme.bins[s].push_back({e});
            scheme.bin_of[s][e] = e;
        }
    }
    return scheme;
}

DpcSpec make_spec(TrellisPreset preset, double design_power, int r, BinStrategy strategy,
                  double alpha) {
    if (alpha < 0.0 || alpha > 1.0) {
        throw std::invalid_argument("alpha must lie in [0, 1]");
    }
    DpcSpec spec;
    spec.trellis = build_trellis(preset, build_constellation(preset_constellation(preset), design_power));
    if (r == spec.trellis.r0) {
        spec.bins = unit_bins(spec.trellis);
    } else {
        spec.bins = build_bins(spec.trellis, r, strategy);
    }
    spec.alpha = alpha;
    return spec;
}

std::vector<std::vector<int>> enumerate_valid_codewords(const DpcSpec& spec,
                                                        const std::vector<std::uint8_t>& message,
                                                        int n, int start_state) {
    if (n < 1 || n > 12) {
        throw std::length_error("codeword enumeration is capped at n <= 12");
    }
    if (message.size() != static_cast<std::size_t>(n) * spec.r()) {
        throw std::invalid_argument("message length must be n*r bits");
    }
    if (start_state < 0 || start_state >= spec.trellis.num_states) {
        throw std::invalid_argument("start state out of range");
    }
    const std::vector<int> symbols = bits_to_symbols(message, spec.r());

    std::vector<std::vector<int>> out;
    std::vector<int> labels(n);
    auto walk = [&](auto&& self, int t, int state) -> void {
        if (t == n) {
            out.push_back(labels);
            return;
        }
        for (int e : spec.bins.bins[state][symbols[t]]) {
            labels[t] = spec.trellis.edges[state][e].label;
            self(self, t + 1, spec.trellis.edges[state][e].next_state);
        }
    };
    walk(walk, 0, start_state);
    return out;
}

}  // namespace dpc
