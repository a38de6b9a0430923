#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string_view>
#include <vector>

namespace dpc {

using cplx = std::complex<double>;

enum class ConstellationKind { Qam4, Qam8, Qam16, Pam8 };

const char* to_string(ConstellationKind kind);
std::optional<ConstellationKind> parse_constellation(std::string_view name);

// Mean squared radius of the unscaled integer grid; avg_power = grid_power * A^2.
int grid_power(ConstellationKind kind);

// Labeled signal set on the odd-integer grid, scaled so that the average power
// over all points (uniform weighting) equals avg_power exactly in closed form.
struct Constellation {
    ConstellationKind kind{};
    double scale = 0.0;  // grid unit A, points[l] = scale * (grid[l][0] + i*grid[l][1])
    double avg_power = 0.0;
    std::vector<cplx> points;              // indexed by label
    std::vector<std::array<int, 2>> grid;  // odd integer coordinates per label

    int size() const { return static_cast<int>(points.size()); }
};

// avg_power must be positive. The label maps are fixed (documented in the
// README); 8-PAM labels run left to right in amplitude order, the QAM maps are
// chosen for their set-partition structure.
Constellation build_constellation(ConstellationKind kind, double avg_power);

// Binary set-partition tree. Level k holds 2^k cosets of M/2^k labels each;
// every split maximizes the smaller of the two halves' minimum intra-coset
// squared distances (exhaustive search, deterministic tie-break: the half
// keeping the parent's smallest label takes the parent's index, and among
// equally good splits the lexicographically smallest half wins).
struct PartitionChain {
    std::vector<std::vector<std::vector<int>>> levels;  // levels[k][coset] -> sorted labels
    std::vector<double> min_sq_distance;                // per level; +inf once cosets are singletons
};

PartitionChain build_partition(const Constellation& c);

}  // namespace dpc
