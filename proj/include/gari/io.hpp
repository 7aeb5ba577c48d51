#ifndef GARI_IO_HPP
#define GARI_IO_HPP

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include <json.hpp>

#include "gari/decoder.hpp"
#include "gari/dem.hpp"
#include "gari/gari_model.hpp"
#include "gari/harness.hpp"
#include "gari/placement.hpp"
#include "gari/timing.hpp"

namespace gari {
namespace io {

using nlohmann::json;

// ---- sparse matrices ----

inline json matrix_to_json(const SparseBitMatrix& m) {
    json e = json::array();
    for (const auto& [r, c] : m.entries()) e.push_back({r, c});
    return {{"rows", m.n_rows()}, {"cols", m.n_cols()}, {"entries", std::move(e)}};
}

inline SparseBitMatrix matrix_from_json(const json& j) {
    std::vector<Entry> entries;
    for (const auto& e : j.at("entries"))
        entries.emplace_back(e.at(0).get<std::uint32_t>(), e.at(1).get<std::uint32_t>());
    return {j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>(),
            std::move(entries)};
}

/// Matrix Market coordinate format, pattern written as field "integer" with
/// value 1, 1-based indices, entries sorted (row, col).
inline void write_matrix_market(std::ostream& os, const SparseBitMatrix& m) {
    os << "%%MatrixMarket matrix coordinate integer general\n";
    os << m.n_rows() << ' ' << m.n_cols() << ' ' << m.n_entries() << '\n';
    for (const auto& [r, c] : m.entries()) os << (r + 1) << ' ' << (c + 1) << " 1\n";
}

inline SparseBitMatrix read_matrix_market(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("%%MatrixMarket", 0) != 0)
        throw invalid_input("matrix market: missing header");
    while (std::getline(is, line) && (line.empty() || line[0] == '%')) {}
    std::istringstream head(line);
    std::size_t rows, cols, nnz;
    if (!(head >> rows >> cols >> nnz)) throw invalid_input("matrix market: bad size line");
    std::vector<Entry> entries;
    entries.reserve(nnz);
    for (std::size_t i = 0; i < nnz; ++i) {
        std::size_t r, c;
        long v = 1;
        if (!(is >> r >> c)) throw invalid_input("matrix market: truncated entries");
        is >> v;
        if (r < 1 || c < 1) throw invalid_input("matrix market: indices are 1-based");
        if (v % 2)
            entries.emplace_back(static_cast<std::uint32_t>(r - 1),
                                 static_cast<std::uint32_t>(c - 1));
    }
    return {rows, cols, std::move(entries)};
}

// ---- detector error model ----

inline json dem_to_json(const DetectorErrorModel& dem) {
    return {{"dx", matrix_to_json(dem.dx)},
            {"dz", matrix_to_json(dem.dz)},
            {"dxp", matrix_to_json(dem.dxp)},
            {"dzp", matrix_to_json(dem.dzp)},
            {"observables", matrix_to_json(dem.observables)},
            {"priors_z", dem.priors_z},
            {"priors_x", dem.priors_x},
            {"priors_y", dem.priors_y}};
}

inline DetectorErrorModel dem_from_json(const json& j) {
    DetectorErrorModel dem;
    dem.dx = matrix_from_json(j.at("dx"));
    dem.dz = matrix_from_json(j.at("dz"));
    dem.dxp = matrix_from_json(j.at("dxp"));
    dem.dzp = matrix_from_json(j.at("dzp"));
    if (j.contains("observables")) dem.observables = matrix_from_json(j.at("observables"));
    dem.priors_z = j.at("priors_z").get<std::vector<double>>();
    dem.priors_x = j.at("priors_x").get<std::vector<double>>();
    dem.priors_y = j.at("priors_y").get<std::vector<double>>();
    dem.validate();
    return dem;
}

// ---- gari model ----

inline json gari_model_to_json(const GariModel& g) {
    return {{"dx", matrix_to_json(g.dx)},
            {"dz", matrix_to_json(g.dz)},
            {"u", matrix_to_json(g.u)},
            {"v", matrix_to_json(g.v)},
            {"group_sizes",
             {{"e_z", g.groups.n_ez},
              {"e_x", g.groups.n_ex},
              {"e_y", g.groups.n_ey},
              {"ebar_z", g.groups.n_ebz},
              {"ebar_x", g.groups.n_ebx}}},
            {"llr0", g.llr0}};
}

inline GariModel gari_model_from_json(const json& j) {
    GariModel g;
    g.dx = matrix_from_json(j.at("dx"));
    g.dz = matrix_from_json(j.at("dz"));
    g.u = matrix_from_json(j.at("u"));
    g.v = matrix_from_json(j.at("v"));
    const auto& gs = j.at("group_sizes");
    g.groups.n_ez = gs.at("e_z").get<std::size_t>();
    g.groups.n_ex = gs.at("e_x").get<std::size_t>();
    g.groups.n_ey = gs.at("e_y").get<std::size_t>();
    g.groups.n_ebz = gs.at("ebar_z").get<std::size_t>();
    g.groups.n_ebx = gs.at("ebar_x").get<std::size_t>();
    g.llr0 = j.at("llr0").get<std::vector<double>>();
    g.u_row.resize(g.u.n_cols());
    g.v_row.resize(g.v.n_cols());
    for (std::size_t c = 0; c < g.u.n_cols(); ++c) g.u_row[c] = g.u.col(c)[0];
    for (std::size_t c = 0; c < g.v.n_cols(); ++c) g.v_row[c] = g.v.col(c)[0];
    g.validate();
    return g;
}

// ---- syndromes ----

inline json syndrome_to_json(const Syndrome& s) {
    return {{"s_x", s.s_x}, {"s_z", s.s_z}};
}

inline Syndrome syndrome_from_json(const json& j) {
    Syndrome s;
    s.s_x = j.at("s_x").get<std::vector<std::uint8_t>>();
    s.s_z = j.at("s_z").get<std::vector<std::uint8_t>>();
    for (auto b : s.s_x)
        if (b > 1) throw invalid_input("syndrome: bits must be 0/1");
    for (auto b : s.s_z)
        if (b > 1) throw invalid_input("syndrome: bits must be 0/1");
    return s;
}

/// Packed binary syndrome: magic "GSYN", version byte 1, two u32
/// little-endian bit lengths, then s_x and s_z bit vectors, each packed
/// LSB-first (bit i lives in byte i/8, position i%8) and padded to a byte.
inline void write_syndrome_packed(std::ostream& os, const Syndrome& s) {
    auto w32 = [&os](std::uint32_t v) {
        char b[4] = {static_cast<char>(v), static_cast<char>(v >> 8),
                     static_cast<char>(v >> 16), static_cast<char>(v >> 24)};
        os.write(b, 4);
    };
    os.write("GSYN", 4);
    os.put(1);
    w32(static_cast<std::uint32_t>(s.s_x.size()));
    w32(static_cast<std::uint32_t>(s.s_z.size()));
    auto pack = [&os](const std::vector<std::uint8_t>& bits) {
        std::uint8_t byte = 0;
        for (std::size_t i = 0; i < bits.size(); ++i) {
            if (bits[i]) byte |= static_cast<std::uint8_t>(1u << (i % 8));
            if (i % 8 == 7) {
                os.put(static_cast<char>(byte));
                byte = 0;
            }
        }
        if (bits.size() % 8) os.put(static_cast<char>(byte));
    };
    pack(s.s_x);
    pack(s.s_z);
}

inline Syndrome read_syndrome_packed(std::istream& is) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::string(magic, 4) != "GSYN")
        throw invalid_input("syndrome: bad magic");
    if (is.get() != 1) throw invalid_input("syndrome: unsupported version");
    auto r32 = [&is] {
        unsigned char b[4];
        is.read(reinterpret_cast<char*>(b), 4);
        return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
               (static_cast<std::uint32_t>(b[2]) << 16) |
               (static_cast<std::uint32_t>(b[3]) << 24);
    };
    std::uint32_t nx = r32(), nz = r32();
    auto unpack = [&is](std::uint32_t n) {
        std::vector<std::uint8_t> bits(n);
        std::uint8_t byte = 0;
        for (std::uint32_t i = 0; i < n; ++i) {
            if (i % 8 == 0) byte = static_cast<std::uint8_t>(is.get());
            bits[i] = (byte >> (i % 8)) & 1;
        }
        return bits;
    };
    Syndrome s;
    s.s_x = unpack(nx);
    s.s_z = unpack(nz);
    if (!is) throw invalid_input("syndrome: truncated file");
    return s;
}

// ---- results and reports ----

inline json decode_result_to_json(const DecodeResult& r) {
    const auto& gs = r.groups;
    auto slice = [&r](std::size_t off, std::size_t n) {
        return std::vector<std::uint8_t>(r.hard.begin() + static_cast<std::ptrdiff_t>(off),
                                         r.hard.begin() + static_cast<std::ptrdiff_t>(off + n));
    };
    json trace = json::array();
    for (const auto& t : r.trace)
        trace.push_back({{"step", t.step},
                         {"serial", t.serial},
                         {"parallel", t.parallel},
                         {"parity_checked", t.parity_checked},
                         {"converged", t.converged}});
    return {{"converged", r.converged},
            {"iterations", r.iterations},
            {"hard",
             {{"e_z", slice(gs.off_ez(), gs.n_ez)},
              {"e_x", slice(gs.off_ex(), gs.n_ex)},
              {"e_y", slice(gs.off_ey(), gs.n_ey)},
              {"ebar_z", slice(gs.off_ebz(), gs.n_ebz)},
              {"ebar_x", slice(gs.off_ebx(), gs.n_ebx)}}},
            {"trace", std::move(trace)}};
}

inline json tile_map_to_json(const TileMap& tm) {
    return {{"n_serial_tiles", tm.n_serial_tiles},
            {"serial_assignment", tm.serial_assignment},
            {"n_uv_tiles", tm.n_uv_tiles},
            {"uv_capacity", tm.uv_capacity},
            {"uv_assignment_u", tm.uv_assignment_u},
            {"uv_assignment_v", tm.uv_assignment_v},
            {"serial_load_dx", tm.serial_load_dx},
            {"serial_load_dz", tm.serial_load_dz},
            {"uv_load_u", tm.uv_load_u},
            {"uv_load_v", tm.uv_load_v}};
}

inline TileMap tile_map_from_json(const json& j) {
    TileMap tm;
    tm.n_serial_tiles = j.at("n_serial_tiles").get<std::size_t>();
    tm.serial_assignment = j.at("serial_assignment").get<std::vector<std::uint32_t>>();
    tm.n_uv_tiles = j.value("n_uv_tiles", std::size_t{0});
    tm.uv_capacity = j.value("uv_capacity", std::size_t{500});
    if (j.contains("uv_assignment_u"))
        tm.uv_assignment_u = j.at("uv_assignment_u").get<std::vector<std::uint32_t>>();
    if (j.contains("uv_assignment_v"))
        tm.uv_assignment_v = j.at("uv_assignment_v").get<std::vector<std::uint32_t>>();
    tm.serial_load_dx = j.value("serial_load_dx", std::vector<std::size_t>{});
    tm.serial_load_dz = j.value("serial_load_dz", std::vector<std::size_t>{});
    tm.uv_load_u = j.value("uv_load_u", std::vector<std::size_t>{});
    tm.uv_load_v = j.value("uv_load_v", std::vector<std::size_t>{});
    return tm;
}

inline json timing_report_to_json(const TimingReport& r, double clock_period_ns,
                                  std::size_t iterations) {
    return {{"cycles_load", r.cycles_load},
            {"cycles_dx", r.cycles_dx},
            {"cycles_dz", r.cycles_dz},
            {"cycles_route_down", r.cycles_route_down},
            {"cycles_uv", r.cycles_uv},
            {"cycles_route_up", r.cycles_route_up},
            {"cycles_fill", r.cycles_fill},
            {"stall_cycles", r.stall_cycles},
            {"overlap_ok", r.overlap_ok},
            {"budget",
             {{"u_chain_cycles", r.budget.u_chain_cycles},
              {"v_chain_cycles", r.budget.v_chain_cycles},
              {"u_budget_cycles", r.budget.u_budget_cycles},
              {"v_budget_cycles", r.budget.v_budget_cycles}}},
            {"clock_period_ns", clock_period_ns},
            {"iterations", iterations},
            {"total_cycles", r.total_cycles(static_cast<double>(iterations))},
            {"latency_ns", latency_ns(r, clock_period_ns, static_cast<double>(iterations))}};
}

/// Human-readable phase table, one lane per hardware unit.
inline std::string timing_report_table(const TimingReport& r, double clock_period_ns,
                                       std::size_t iterations) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(1);
    os << "phase                cycles\n";
    os << "load (overlapped)    " << r.cycles_load << "\n";
    os << "serial D_X           " << r.cycles_dx << "\n";
    os << "serial D_Z           " << r.cycles_dz << "\n";
    os << "route serial->U,V    " << r.cycles_route_down << "  (hidden)\n";
    os << "U,V processing       " << r.cycles_uv << "  (hidden)\n";
    os << "route U,V->serial    " << r.cycles_route_up << "  (hidden)\n";
    os << "pipeline fill        " << r.cycles_fill << "\n";
    if (r.stall_cycles) os << "stale-hazard stalls  " << r.stall_cycles << " per iteration\n";
    os << "overlap_ok           " << (r.overlap_ok ? "yes" : "no") << "\n";
    os << "total(" << iterations << ")             "
       << r.total_cycles(static_cast<double>(iterations)) << " cycles, "
       << latency_ns(r, clock_period_ns, static_cast<double>(iterations)) << " ns\n";
    return os.str();
}

inline json bench_report_to_json(const BenchReport& r) {
    json hist = json::array();
    for (const auto& [iters, count] : r.iteration_histogram)
        hist.push_back({{"iterations", iters}, {"count", count}});
    json members = json::array();
    for (std::size_t m = 0; m < r.members.size(); ++m)
        members.push_back({{"member", m},
                           {"converged", r.members[m].converged},
                           {"wins", r.members[m].wins},
                           {"mean_iterations", r.members[m].mean_iterations}});
    return {{"shots", r.shots},
            {"converged_shots", r.converged_shots},
            {"converged_fraction", r.converged_fraction},
            {"logical_errors", r.logical_errors},
            {"logical_error_rate", r.logical_error_rate},
            {"iteration_histogram", std::move(hist)},
            {"mean_iterations", r.mean_iterations},
            {"mean_latency_ns", r.mean_latency_ns},
            {"members", std::move(members)},
            {"rng", r.rng_name}};
}

inline std::string bench_report_to_csv(const BenchReport& r) {
    std::ostringstream os;
    os << "iterations,count\n";
    for (const auto& [iters, count] : r.iteration_histogram) os << iters << ',' << count << '\n';
    return os.str();
}

inline json spec_to_json(const FixedPointSpec& s) {
    return {{"bits_llr", s.bits_llr},
            {"bits_cn", s.bits_cn},
            {"bits_vn", s.bits_vn},
            {"alpha", s.alpha},
            {"mode", s.mode == NumericMode::quantized ? "quantized" : "real"}};
}

inline FixedPointSpec spec_from_json(const json& j) {
    FixedPointSpec s;
    s.bits_llr = j.value("bits_llr", s.bits_llr);
    s.bits_cn = j.value("bits_cn", s.bits_cn);
    s.bits_vn = j.value("bits_vn", s.bits_vn);
    s.alpha = j.value("alpha", s.alpha);
    std::string mode = j.value("mode", std::string("quantized"));
    if (mode == "quantized") s.mode = NumericMode::quantized;
    else if (mode == "real" || mode == "real-valued" || mode == "real_valued")
        s.mode = NumericMode::real_valued;
    else throw invalid_input("spec: unknown mode " + mode);
    s.validate();
    return s;
}

// ---- file helpers ----

inline json load_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw invalid_input("cannot open " + path);
    json j;
    f >> j;
    return j;
}

inline void save_text(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw invalid_input("cannot open " + path + " for writing");
    f << text;
}

inline void save_json(const std::string& path, const json& j) {
    save_text(path, j.dump(2) + "\n");
}

} // namespace io
} // namespace gari

#endif
