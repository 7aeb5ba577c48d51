#ifndef GARI_CROSSBAR_HPP
#define GARI_CROSSBAR_HPP

#include <cstdint>
#include <deque>
#include <vector>

#include "gari/errors.hpp"

namespace gari {

struct TaggedMessage {
    double payload = 0.0;
    std::uint32_t tag = 0; // destination output port
};

/// K-stage tag-routed fabric. Ports are padded to 2^K virtual ports for
/// non-power-of-two sizes; the virtual ports never carry traffic. Stage i
/// pairs ports whose indices differ by 2^(K-1-i) and routes on that tag bit
/// (MSB first), so after K stages a message sits at the port equal to its
/// tag. Intermediate storage is a ping-pong pair per port; input and final
/// FIFOs are depth-configurable.
struct CrossbarNetwork {
    std::size_t j_in = 0;
    std::size_t j_out = 0;
    std::size_t fifo_depth = 0; // 0 = auto: 2x messages per port
    // Intermediate buffering per stage node: one ping-pong pair per read
    // port, so the dual-port node holds 4 slots.
    std::size_t stage_capacity = 4;
    // dual AXI-Stream ports per node: up to 2 moves per direction per cycle
    bool dual_port = true;

    std::size_t port_span() const { return j_in > j_out ? j_in : j_out; }
    std::size_t stages() const { return ceil_log2(port_span()); }
    std::size_t padded_ports() const { return std::size_t{1} << stages(); }

    static std::size_t ceil_log2(std::size_t n) {
        std::size_t k = 0;
        while ((std::size_t{1} << k) < n) ++k;
        return k;
    }
};

namespace detail {

/// Literal per-stage wiring formula as published:
///   j -> (j mod 2^(K-1-i))*2 + floor(J/2^(K-1-i)) mod 2 + floor(J/2^(K-i))*2^(K-i)
/// Note the port count J appears inside the floor terms; the map is kept
/// verbatim and only used when it actually permutes the padded port range.
inline std::size_t literal_stage_map(std::size_t j, std::size_t i, std::size_t J,
                                     std::size_t K) {
    std::size_t m = std::size_t{1} << (K - 1 - i);
    return (j % m) * 2 + (J / m) % 2 + (J / (2 * m)) * (2 * m);
}

/// Bit-rotation butterfly wiring with the same MSB-radix semantics, used
/// when the literal formula does not yield a permutation.
inline std::size_t butterfly_stage_map(std::size_t j, std::size_t i, std::size_t K) {
    std::size_t m = std::size_t{1} << (K - 1 - i);
    return (j % m) * 2 + (j / m) % 2 + (j / (2 * m)) * (2 * m);
}

inline bool literal_map_is_permutation(std::size_t i, std::size_t J, std::size_t K) {
    std::size_t p = std::size_t{1} << K;
    std::vector<std::uint8_t> hit(p, 0);
    for (std::size_t j = 0; j < p; ++j) {
        std::size_t t = literal_stage_map(j, i, J, K);
        if (t >= p || hit[t]) return false;
        hit[t] = 1;
    }
    return true;
}

} // namespace detail

/// Wiring of stage i for a J-port network, evaluated over the padded port
/// range. Falls back to the butterfly map when the literal formula is not a
/// permutation for this (J, i).
inline std::size_t stage_index_map(std::size_t j, std::size_t i, std::size_t J) {
    if (J < 1) throw invalid_input("stage_index_map: empty network");
    std::size_t K = CrossbarNetwork::ceil_log2(J);
    if (K == 0) K = 1; // J = 1 degenerates to a single pass-through stage
    std::size_t p = std::size_t{1} << K;
    if (j >= p || i >= K) throw invalid_input("stage_index_map: index out of range");
    if (detail::literal_map_is_permutation(i, J, K))
        return detail::literal_stage_map(j, i, J, K);
    return detail::butterfly_stage_map(j, i, K);
}

struct RouteResult {
    std::vector<std::vector<TaggedMessage>> outputs; // per output port, arrival order
    std::size_t cycles = 0;
    std::size_t collisions = 0; // head-blocked move attempts
};

/// Cycle-stepped routing of one batch. Per cycle each buffer pops up to one
/// message per read port (two with dual_port) in FIFO order; a stage buffer
/// accepts up to two messages per cycle subject to its capacity; the final
/// output FIFOs drain one message per port per cycle into the result.
inline RouteResult route(const CrossbarNetwork& net,
                         const std::vector<std::vector<TaggedMessage>>& batch) {
    if (batch.size() != net.j_in) throw invalid_input("route: batch size != j_in");
    std::size_t K = net.stages();
    if (K == 0) K = 1;
    std::size_t P = std::size_t{1} << K;

    std::size_t total = 0, per_port_max = 0;
    for (const auto& b : batch) {
        total += b.size();
        per_port_max = b.size() > per_port_max ? b.size() : per_port_max;
    }
    for (const auto& b : batch)
        for (const auto& m : b)
            if (m.tag >= net.j_out) throw invalid_input("route: tag out of range");

    std::size_t depth = net.fifo_depth ? net.fifo_depth : 2 * (per_port_max ? per_port_max : 1);
    const std::size_t pingpong = net.stage_capacity < 1 ? 1 : net.stage_capacity;
    const std::size_t pops = net.dual_port ? 2 : 1;
    const std::size_t pushes = net.dual_port ? 2 : 1;

    // buf[0] = input FIFOs, buf[1..K-1] = ping-pong stage buffers,
    // buf[K] = final output FIFOs.
    std::vector<std::vector<std::deque<TaggedMessage>>> buf(K + 1,
        std::vector<std::deque<TaggedMessage>>(P));
    for (std::size_t p = 0; p < net.j_in; ++p)
        for (const auto& m : batch[p]) {
            if (buf[0][p].size() >= depth)
                throw backpressure_overflow("route: input FIFO overflow");
            buf[0][p].push_back(m);
        }

    RouteResult res;
    res.outputs.resize(net.j_out);

    std::size_t delivered = 0;
    std::vector<std::size_t> accepted(P, 0);
    while (delivered < total) {
        ++res.cycles;
        // drain final outputs first so stage K-1 sees freed space this cycle
        for (std::size_t p = 0; p < net.j_out; ++p)
            if (!buf[K][p].empty()) {
                res.outputs[p].push_back(buf[K][p].front());
                buf[K][p].pop_front();
                ++delivered;
            }
        for (std::size_t s = K; s-- > 0;) {
            std::size_t bit = K - 1 - s;
            std::size_t cap = (s + 1 == K) ? depth : pingpong;
            std::fill(accepted.begin(), accepted.end(), 0);
            for (std::size_t p = 0; p < P; ++p) {
                auto& q = buf[s][p];
                for (std::size_t n = 0; n < pops && !q.empty(); ++n) {
                    std::uint32_t want = (q.front().tag >> bit) & 1u;
                    std::size_t dest = (p & ~(std::size_t{1} << bit)) |
                                       (static_cast<std::size_t>(want) << bit);
                    if (accepted[dest] < pushes && buf[s + 1][dest].size() < cap) {
                        buf[s + 1][dest].push_back(q.front());
                        q.pop_front();
                        ++accepted[dest];
                    } else {
                        ++res.collisions; // head blocked, port stalls
                        break;
                    }
                }
            }
        }
        if (res.cycles > 4 * (total + P + K) + 1000)
            throw backpressure_overflow("route: no forward progress (undersized buffers)");
    }
    return res;
}

} // namespace gari

#endif
