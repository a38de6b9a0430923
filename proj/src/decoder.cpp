#include "dpc/decoder.hpp"

#include <stdexcept>

#include "dpc/bits.hpp"
#include "dpc/detail/viterbi.hpp"

namespace dpc {

DecodedBlock medd_decode(const DpcSpec& spec, const std::vector<cplx>& y) {
    if (y.empty()) {
        throw std::invalid_argument("received block must be nonempty");
    }
    const int n = static_cast<int>(y.size());
    const Constellation& c = spec.constellation();

    auto edge_open = [](int, int, int) { return true; };
    auto label_metric = [&](int label, int t) { return point_sq_distance(y[t], c.points[label]); };
    detail::ViterbiResult path = detail::best_path(spec.trellis, n, 0, edge_open, label_metric);

    DecodedBlock block;
    block.labels = std::move(path.labels);
    block.state_path = std::move(path.state_path);
    block.distance = path.metric;
    block.u.resize(n);
    std::vector<int> symbols(n);
    for (int t = 0; t < n; ++t) {
        block.u[t] = c.points[block.labels[t]];
        symbols[t] = spec.bins.bin_of[block.state_path[t]][path.edges[t]];
    }
    block.message = symbols_to_bits(symbols, spec.r());
    return block;
}

std::vector<cplx> recover_dirt(const std::vector<cplx>& y, const std::vector<cplx>& u_hat,
                               double alpha) {
    if (y.size() != u_hat.size()) {
        throw std::invalid_argument("received block and codeword lengths differ");
    }
    if (alpha >= 1.0) {
        throw std::domain_error("dirt recovery needs alpha < 1");
    }
    std::vector<cplx> s_hat(y.size());
    const double denom = 1.0 - alpha;
    for (std::size_t i = 0; i < y.size(); ++i) {
        s_hat[i] = (y[i] - u_hat[i]) / denom;
    }
    return s_hat;
}

}  // namespace dpc
