// Command-line front end: model transform, placement, decoding, timing
// simulation, Monte Carlo benchmarking and crossbar checks.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "gari/crossbar.hpp"
#include "gari/harness.hpp"
#include "gari/io.hpp"

namespace {

using namespace gari;
using nlohmann::json;

void emit(const json& j, const std::string& out) {
    if (out.empty())
        std::cout << j.dump(2) << "\n";
    else
        io::save_json(out, j);
}

Syndrome load_syndrome(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw invalid_input("cannot open " + path);
    char magic[4] = {};
    f.read(magic, 4);
    f.seekg(0);
    if (std::string(magic, 4) == "GSYN") return io::read_syndrome_packed(f);
    json j;
    f >> j;
    return io::syndrome_from_json(j);
}

FixedPointSpec load_spec(const std::string& path) {
    if (path.empty()) return {};
    return io::spec_from_json(io::load_json(path));
}

Basis parse_basis(const std::string& s) {
    if (s == "x" || s == "X") return Basis::X;
    if (s == "z" || s == "Z") return Basis::Z;
    throw invalid_input("basis must be x or z, got " + s);
}

std::vector<std::size_t> parse_degrees(const std::string& csv) {
    std::vector<std::size_t> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stoul(tok));
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"GARI message-passing decoder toolkit"};
    app.require_subcommand(1);

    std::string dem_path, spec_path, out_path, format = "json";
    std::string syndrome_path, map_path, which = "dx", basis_str = "z";
    std::size_t shots = 1000, ensemble = 1, max_iters = 64, iters = 1;
    std::uint64_t seed = 0;
    double scale = 1.0, clock_ns = 3.647;
    std::size_t tiles_hint = 0, uv_capacity = 500, pipe_serial = 8, pipe_uv = 10;
    std::string uv_degrees_csv;
    std::size_t ports = 16, messages = 500, fifo_depth = 0;

    auto add_dem = [&](CLI::App* c) {
        c->add_option("--dem", dem_path, "DEM JSON file")->required();
    };

    auto* c_transform = app.add_subcommand("transform", "Derive the GARI model from a DEM");
    add_dem(c_transform);
    c_transform->add_option("--out", out_path);

    auto* c_map = app.add_subcommand("map", "Compute tile assignments");
    add_dem(c_map);
    c_map->add_option("--tiles", tiles_hint, "serial tile count hint");
    c_map->add_option("--uv-capacity", uv_capacity);
    c_map->add_option("--uv-degrees", uv_degrees_csv, "comma-separated per-tile max degrees");
    c_map->add_option("--out", out_path);

    auto* c_order = app.add_subcommand("order", "Compute a serial check ordering");
    add_dem(c_order);
    c_order->add_option("--which", which, "dx or dz");
    c_order->add_option("--pipeline-depth", pipe_serial);
    c_order->add_option("--out", out_path);

    auto* c_decode = app.add_subcommand("decode", "Decode one syndrome");
    add_dem(c_decode);
    c_decode->add_option("--syndrome", syndrome_path, "syndrome JSON or packed binary")->required();
    c_decode->add_option("--spec", spec_path, "fixed-point spec JSON");
    c_decode->add_option("--max-iters", max_iters);
    c_decode->add_option("--basis", basis_str, "x or z");
    c_decode->add_option("--out", out_path);

    auto* c_sim = app.add_subcommand("simulate", "Emit a timing report");
    add_dem(c_sim);
    c_sim->add_option("--map", map_path, "TileMap JSON (replay a published mapping)");
    c_sim->add_option("--clock-ns", clock_ns);
    c_sim->add_option("--iters", iters);
    c_sim->add_option("--pipeline-serial", pipe_serial);
    c_sim->add_option("--pipeline-uv", pipe_uv);
    c_sim->add_option("--out", out_path);

    auto* c_bench = app.add_subcommand("bench", "Monte Carlo benchmark");
    add_dem(c_bench);
    c_bench->add_option("--spec", spec_path);
    c_bench->add_option("--shots", shots);
    c_bench->add_option("--seed", seed);
    c_bench->add_option("--ensemble", ensemble);
    c_bench->add_option("--max-iters", max_iters);
    c_bench->add_option("--basis", basis_str, "x or z");
    c_bench->add_option("--scale", scale, "multiplier on priors");
    c_bench->add_option("--clock-ns", clock_ns);
    c_bench->add_option("--out", out_path);
    c_bench->add_option("--format", format, "json or csv");

    auto* c_route = app.add_subcommand("route-test", "Crossbar delivery property run");
    c_route->add_option("--ports", ports);
    c_route->add_option("--messages", messages, "messages per input port");
    c_route->add_option("--seed", seed);
    c_route->add_option("--fifo-depth", fifo_depth);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (*c_transform) {
            auto dem = io::dem_from_json(io::load_json(dem_path));
            emit(io::gari_model_to_json(derive_uv(dem)), out_path);
        } else if (*c_map) {
            auto dem = io::dem_from_json(io::load_json(dem_path));
            GariModel g = derive_uv(dem);
            TileMap tm;
            if (uv_degrees_csv.empty()) {
                tm = default_tile_map(g, uv_capacity);
                if (tiles_hint) {
                    TileMap hinted = map_serial_variables(g, tiles_hint);
                    hinted.uv_capacity = tm.uv_capacity;
                    hinted.n_uv_tiles = tm.n_uv_tiles;
                    hinted.uv_assignment_u = tm.uv_assignment_u;
                    hinted.uv_assignment_v = tm.uv_assignment_v;
                    hinted.uv_load_u = tm.uv_load_u;
                    hinted.uv_load_v = tm.uv_load_v;
                    tm = hinted;
                }
            } else {
                tm = map_serial_variables(g, tiles_hint);
                tm.uv_capacity = uv_capacity;
                map_uv_checks(g, parse_degrees(uv_degrees_csv), tm);
            }
            emit(io::tile_map_to_json(tm), out_path);
        } else if (*c_order) {
            auto dem = io::dem_from_json(io::load_json(dem_path));
            GariModel g = derive_uv(dem);
            SerialMatrix m = which == "dz" ? SerialMatrix::DZ : SerialMatrix::DX;
            CheckOrdering ord = order_checks(g, m, pipe_serial);
            emit({{"permutation", ord.permutation},
                  {"min_separation", ord.min_separation},
                  {"accepted", ord.accepted}},
                 out_path);
        } else if (*c_decode) {
            auto dem = io::dem_from_json(io::load_json(dem_path));
            GariModel g = derive_uv(dem);
            Syndrome syn = load_syndrome(syndrome_path);
            Basis basis = parse_basis(basis_str);
            DecodeResult r = decode(g, syn, load_spec(spec_path), max_iters, basis);
            json j = io::decode_result_to_json(r);
            PhysicalError rec = recover_physical_error(g, r.hard);
            const auto& gs = g.groups;
            auto slice = [&rec](std::size_t off, std::size_t n) {
                return std::vector<std::uint8_t>(
                    rec.bits.begin() + static_cast<std::ptrdiff_t>(off),
                    rec.bits.begin() + static_cast<std::ptrdiff_t>(off + n));
            };
            j["correction"] = {{"e_z", slice(gs.off_ez(), gs.n_ez)},
                               {"e_x", slice(gs.off_ex(), gs.n_ex)},
                               {"e_y", slice(gs.off_ey(), gs.n_ey)},
                               {"consistent", rec.consistent}};
            emit(j, out_path);
        } else if (*c_sim) {
            auto dem = io::dem_from_json(io::load_json(dem_path));
            GariModel g = derive_uv(dem);
            TileMap tm = map_path.empty() ? default_tile_map(g)
                                          : io::tile_map_from_json(io::load_json(map_path));
            PipelineDepths depths{pipe_serial, pipe_uv};
            TimingReport rep = cycle_model(g, tm, depths);
            std::cout << io::timing_report_table(rep, clock_ns, iters);
            emit(io::timing_report_to_json(rep, clock_ns, iters), out_path);
        } else if (*c_bench) {
            auto dem = io::dem_from_json(io::load_json(dem_path));
            ExperimentConfig cfg;
            cfg.spec = load_spec(spec_path);
            cfg.shots = shots;
            cfg.seed = seed;
            cfg.ensemble_size = ensemble;
            cfg.max_iters = max_iters;
            cfg.basis = parse_basis(basis_str);
            cfg.physical_error_scale = scale;
            cfg.clock_period_ns = clock_ns;
            BenchReport rep = run_shots(dem, cfg);
            if (format == "csv") {
                std::string csv = io::bench_report_to_csv(rep);
                if (out_path.empty()) std::cout << csv;
                else io::save_text(out_path, csv);
            } else {
                emit(io::bench_report_to_json(rep), out_path);
            }
        } else if (*c_route) {
            CrossbarNetwork net{ports, ports, fifo_depth};
            SplitMix64 rng(seed, 0xc405bau, 0);
            std::vector<std::vector<TaggedMessage>> batch(ports);
            for (std::size_t p = 0; p < ports; ++p)
                for (std::size_t m = 0; m < messages; ++m)
                    batch[p].push_back({rng.next_double(),
                                        static_cast<std::uint32_t>(rng.next_below(ports))});
            RouteResult res = route(net, batch);
            std::size_t max_port = 0;
            for (const auto& o : res.outputs) max_port = std::max(max_port, o.size());
            bool delivered_ok = true;
            for (std::size_t p = 0; p < ports; ++p)
                for (const auto& m : res.outputs[p])
                    if (m.tag != p) delivered_ok = false;
            double overhead =
                messages ? static_cast<double>(res.cycles) / static_cast<double>(max_port) - 1.0
                         : 0.0;
            std::cout << "ports=" << ports << " stages=" << net.stages()
                      << " cycles=" << res.cycles << " collisions=" << res.collisions
                      << " busiest_port=" << max_port << " overhead=" << overhead * 100.0
                      << "%" << " delivery=" << (delivered_ok ? "ok" : "FAIL") << "\n";
            if (!delivered_ok) return 1;
        }
    } catch (const infeasible_mapping& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
