#include "dpc/constellation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dpc {
namespace {

// Label -> odd-grid coordinate maps. The 16-QAM map is laid out so that the
// level-3 cosets of the partition chain are the diagonal point pairs; 8-QAM is
// the 4x2 grid; 8-PAM is labeled in amplitude order.
constexpr std::array<std::array<int, 2>, 4> kQam4Grid = {{
    {-1, -1}, {1, -1}, {1, 1}, {-1, 1},
}};

constexpr std::array<std::array<int, 2>, 8> kQam8Grid = {{
    {-3, -1}, {-3, 1}, {-1, 1}, {-1, -1}, {1, -1}, {1, 1}, {3, 1}, {3, -1},
}};

constexpr std::array<std::array<int, 2>, 16> kQam16Grid = {{
    {-3, -3}, {-3, 3}, {1, -3}, {-3, -1}, {-1, 1}, {-1, -1}, {-1, -3}, {-1, 3},
    {-3, 1},  {1, 3},  {1, 1},  {1, -1},  {3, 1},  {3, -1},  {3, -3},  {3, 3},
}};

constexpr std::array<std::array<int, 2>, 8> kPam8Grid = {{
    {-7, 0}, {-5, 0}, {-3, 0}, {-1, 0}, {1, 0}, {3, 0}, {5, 0}, {7, 0},
}};

double min_intra_sq_distance(const Constellation& c, const std::vector<int>& labels) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < labels.size(); ++i) {
        for (std::size_t j = i + 1; j < labels.size(); ++j) {
            best = std::min(best, std::norm(c.points[labels[i]] - c.points[labels[j]]));
        }
    }
    return best;
}

// Best balanced split of one coset. Enumerates every half containing the
// smallest label, in lexicographic order, and keeps the first maximizer of
// min(intra(first), intra(second)).
std::pair<std::vector<int>, std::vector<int>> split_coset(const Constellation& c,
                                                          const std::vector<int>& coset) {
    const int m = static_cast<int>(coset.size());
    const int half = m / 2;
    std::vector<int> pick(half - 1);
    for (int i = 0; i < half - 1; ++i) pick[i] = i;

    std::vector<int> best_first, best_second;
    double best_obj = -1.0;
    for (;;) {
        std::vector<int> first = {coset[0]};
        std::vector<bool> used(m, false);
        used[0] = true;
        for (int i : pick) {
            first.push_back(coset[i + 1]);
            used[i + 1] = true;
        }
        std::vector<int> second;
        for (int i = 0; i < m; ++i) {
            if (!used[i]) second.push_back(coset[i]);
        }
        double obj = std::min(min_intra_sq_distance(c, first), min_intra_sq_distance(c, second));
        if (obj > best_obj) {
            best_obj = obj;
            best_first = first;
            best_second = second;
        }

        // next combination of indices into coset[1..m-1]
        int k = half - 2;
        while (k >= 0 && pick[k] == m - 2 - (half - 2 - k)) --k;
        if (k < 0) break;
        ++pick[k];
        for (int i = k + 1; i < half - 1; ++i) pick[i] = pick[i - 1] + 1;
    }
    return {best_first, best_second};
}

}  // namespace

int grid_power(ConstellationKind kind) {
    switch (kind) {
        case ConstellationKind::Qam4: return 2;
        case ConstellationKind::Qam8: return 6;
        case ConstellationKind::Qam16: return 10;
        case ConstellationKind::Pam8: return 21;
    }
    throw std::invalid_argument("unknown constellation kind");
}

const char* to_string(ConstellationKind kind) {
    switch (kind) {
        case ConstellationKind::Qam4: return "qam4";
        case ConstellationKind::Qam8: return "qam8";
        case ConstellationKind::Qam16: return "qam16";
        case ConstellationKind::Pam8: return "pam8";
    }
    return "?";
}

std::optional<ConstellationKind> parse_constellation(std::string_view name) {
    if (name == "qam4") return ConstellationKind::Qam4;
    if (name == "qam8") return ConstellationKind::Qam8;
    if (name == "qam16") return ConstellationKind::Qam16;
    if (name == "pam8") return ConstellationKind::Pam8;
    return std::nullopt;
}

Constellation build_constellation(ConstellationKind kind, double avg_power) {
    if (!(avg_power > 0.0)) {
        throw std::invalid_argument("constellation avg_power must be positive");
    }
    Constellation c;
    c.kind = kind;
    c.avg_power = avg_power;
    c.scale = std::sqrt(avg_power / grid_power(kind));
    switch (kind) {
        case ConstellationKind::Qam4: c.grid.assign(kQam4Grid.begin(), kQam4Grid.end()); break;
        case ConstellationKind::Qam8: c.grid.assign(kQam8Grid.begin(), kQam8Grid.end()); break;
        case ConstellationKind::Qam16: c.grid.assign(kQam16Grid.begin(), kQam16Grid.end()); break;
        case ConstellationKind::Pam8: c.grid.assign(kPam8Grid.begin(), kPam8Grid.end()); break;
    }
    c.points.reserve(c.grid.size());
    for (const auto& g : c.grid) {
        c.points.emplace_back(g[0] * c.scale, g[1] * c.scale);
    }
    return c;
}

PartitionChain build_partition(const Constellation& c) {
    const int m = c.size();
    if (m == 0 || (m & (m - 1)) != 0) {
        throw std::invalid_argument("unsupported constellation for partitioning");
    }

    PartitionChain chain;
    std::vector<int> all(m);
    for (int i = 0; i < m; ++i) all[i] = i;
    chain.levels.push_back({all});
    chain.min_sq_distance.push_back(min_intra_sq_distance(c, all));

    while (static_cast<int>(chain.levels.back()[0].size()) > 1) {
        const auto& prev = chain.levels.back();
        const int prev_count = static_cast<int>(prev.size());
        std::vector<std::vector<int>> next(2 * prev_count);
        for (int j = 0; j < prev_count; ++j) {
            auto [first, second] = split_coset(c, prev[j]);
            std::sort(first.begin(), first.end());
            std::sort(second.begin(), second.end());
            next[j] = std::move(first);
            next[j + prev_count] = std::move(second);
        }
        double level_min = std::numeric_limits<double>::infinity();
        for (const auto& coset : next) {
            level_min = std::min(level_min, min_intra_sq_distance(c, coset));
        }
        chain.levels.push_back(std::move(next));
        chain.min_sq_distance.push_back(level_min);
    }
    return chain;
}

}  // namespace dpc
