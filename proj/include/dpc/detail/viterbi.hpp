#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "dpc/trellis.hpp"

namespace dpc::detail {

struct ViterbiResult {
    std::vector<int> labels;      // chosen label per step
    std::vector<int> edges;       // chosen edge index per step
    std::vector<int> state_path;  // n+1 states, state_path[0] == start_state
    double metric = 0.0;
};

// Shared add-compare-select core for the encoder (bin-constrained metric
// minimization) and the decoder (full-trellis distance minimization).
//
// EdgeFilter(state, edge_index, t) -> bool gates which edges are open at step
// t; LabelMetric(label, t) -> double prices a label at step t.
//
// Tie handling is fully deterministic and matches exhaustive lexicographic
// search over edge paths: at each merge the surviving candidate minimizes
// (metric, edge_index, rank of predecessor), states are then re-ranked by
// (metric, predecessor rank, edge_index), and the final state minimizes
// (metric, rank). With all metrics equal this selects the path that always
// leaves through the lowest open edge index.
template <typename EdgeFilter, typename LabelMetric>
ViterbiResult best_path(const TrellisCode& trellis, int n, int start_state,
                        EdgeFilter edge_open, LabelMetric label_metric) {
    if (n < 1) throw std::invalid_argument("block length must be positive");
    const int num_states = trellis.num_states;
    const int num_edges = trellis.edges_per_state();
    const double inf = std::numeric_limits<double>::infinity();

    std::vector<double> metric(num_states, inf);
    std::vector<int> rank(num_states, num_states);
    metric[start_state] = 0.0;
    rank[start_state] = 0;

    // Traceback stores the predecessor state and the edge taken into each
    // surviving state at each step.
    std::vector<std::uint8_t> tb_state(static_cast<std::size_t>(n) * num_states);
    std::vector<std::uint8_t> tb_edge(static_cast<std::size_t>(n) * num_states);

    std::vector<double> next_metric(num_states);
    std::vector<int> next_rank(num_states);
    std::vector<int> best_edge(num_states);
    std::vector<int> best_prev(num_states);
    std::vector<double> label_cost(trellis.constellation.size());

    for (int t = 0; t < n; ++t) {
        for (int l = 0; l < trellis.constellation.size(); ++l) {
            label_cost[l] = label_metric(l, t);
        }
        for (int s = 0; s < num_states; ++s) {
            next_metric[s] = inf;
            best_edge[s] = num_edges;
            best_prev[s] = num_states;
        }
        for (int s = 0; s < num_states; ++s) {
            if (metric[s] == inf) continue;
            for (int e = 0; e < num_edges; ++e) {
                if (!edge_open(s, e, t)) continue;
                const TrellisEdge& edge = trellis.edges[s][e];
                const double cand = metric[s] + label_cost[edge.label];
                const int ns = edge.next_state;
                const bool better =
                    cand < next_metric[ns] ||
                    (cand == next_metric[ns] &&
                     (e < best_edge[ns] || (e == best_edge[ns] && rank[s] < rank[best_prev[ns]])));
                if (better) {
                    next_metric[ns] = cand;
                    best_edge[ns] = e;
                    best_prev[ns] = s;
                }
            }
        }
        bool any = false;
        for (int s = 0; s < num_states; ++s) {
            if (next_metric[s] < inf) {
                any = true;
                tb_state[static_cast<std::size_t>(t) * num_states + s] =
                    static_cast<std::uint8_t>(best_prev[s]);
                tb_edge[static_cast<std::size_t>(t) * num_states + s] =
                    static_cast<std::uint8_t>(best_edge[s]);
            }
        }
        if (!any) throw std::logic_error("trellis step with no open edges");

        // Rank survivors by (metric, predecessor rank, edge index); this is
        // the lexicographic order of their edge paths among equal metrics.
        std::vector<int> order;
        for (int s = 0; s < num_states; ++s) {
            if (next_metric[s] < inf) order.push_back(s);
        }
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (next_metric[a] != next_metric[b]) return next_metric[a] < next_metric[b];
            const int ra = rank[best_prev[a]];
            const int rb = rank[best_prev[b]];
            if (ra != rb) return ra < rb;
            return best_edge[a] < best_edge[b];
        });
        for (int s = 0; s < num_states; ++s) next_rank[s] = num_states;
        for (std::size_t i = 0; i < order.size(); ++i) next_rank[order[i]] = static_cast<int>(i);

        metric = next_metric;
        rank = next_rank;
    }

    int final_state = -1;
    for (int s = 0; s < num_states; ++s) {
        if (metric[s] == inf) continue;
        if (final_state < 0 || metric[s] < metric[final_state] ||
            (metric[s] == metric[final_state] && rank[s] < rank[final_state])) {
            final_state = s;
        }
    }

    ViterbiResult res;
    res.metric = metric[final_state];
    res.state_path.assign(n + 1, 0);
    res.labels.assign(n, 0);
    res.edges.assign(n, 0);
    int s = final_state;
    for (int t = n - 1; t >= 0; --t) {
        res.state_path[t + 1] = s;
        const int e = tb_edge[static_cast<std::size_t>(t) * num_states + s];
        const int ps = tb_state[static_cast<std::size_t>(t) * num_states + s];
        res.edges[t] = e;
        res.labels[t] = trellis.edges[ps][e].label;
        s = ps;
    }
    res.state_path[0] = s;
    return res;
}

}  // namespace dpc::detail
