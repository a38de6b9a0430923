#include "dpc/encoder.hpp"

#include <stdexcept>

#include "dpc/bits.hpp"
#include "dpc/detail/viterbi.hpp"

namespace dpc {
namespace {

EncodedBlock encode_common(const DpcSpec& spec, const std::vector<std::uint8_t>& message,
                           const std::vector<cplx>* s) {
    const int r = spec.r();
    if (message.empty() || message.size() % r != 0) {
        throw std::invalid_argument("message length must be a positive multiple of r");
    }
    const int n = static_cast<int>(message.size()) / r;
    if (s && static_cast<int>(s->size()) != n) {
        throw std::invalid_argument("dirt block length must match the message block");
    }
    const std::vector<int> symbols = bits_to_symbols(message, r);
    const Constellation& c = spec.constellation();

    auto edge_open = [&](int state, int e, int t) {
        return spec.bins.bin_of[state][e] == symbols[t];
    };
    auto label_metric = [&](int label, int t) {
        return s ? branch_metric(c.points[label], spec.alpha, (*s)[t]) : 0.0;
    };
    detail::ViterbiResult path = detail::best_path(spec.trellis, n, 0, edge_open, label_metric);

    EncodedBlock block;
    block.message = message;
    block.labels = std::move(path.labels);
    block.state_path = std::move(path.state_path);
    block.metric = path.metric;
    block.u.resize(n);
    block.x.resize(n);
    for (int t = 0; t < n; ++t) {
        block.u[t] = c.points[block.labels[t]];
        block.x[t] = s ? block.u[t] - spec.alpha * (*s)[t] : block.u[t];
    }
    return block;
}

}  // namespace

EncodedBlock pip_encode(const DpcSpec& spec, const std::vector<std::uint8_t>& message,
                        const std::vector<cplx>& s) {
    return encode_common(spec, message, &s);
}

EncodedBlock tcm_encode(const DpcSpec& spec, const std::vector<std::uint8_t>& message) {
    return encode_common(spec, message, nullptr);
}

double dirt_alignment(const std::vector<cplx>& v, const std::vector<cplx>& s) {
    if (v.size() != s.size()) {
        throw std::invalid_argument("sequence lengths differ");
    }
    double dot = 0.0;
    double energy = 0.0;
    for (std::size_t t = 0; t < v.size(); ++t) {
        dot += s[t].real() * v[t].real() + s[t].imag() * v[t].imag();
        energy += std::norm(s[t]);
    }
    return energy == 0.0 ? 0.0 : dot / energy;
}

}  // namespace dpc
