// brknn: batch reverse-k-nearest-neighbor queries over road networks.
//
// Subcommands: load, generate, query, oracle, ablate, sweep. Vertex ids in
// every file format are 1-based; results files list, per query facility, the
// ids of the objects that count it among their k nearest facilities.

#include <CLI11.hpp>
#include <json.hpp>

#include "brknn/engine.hpp"
#include "brknn/oracle.hpp"
#include "brknn/workload.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using brknn::BatchCounters;
using brknn::BatchResult;
using brknn::EngineConfig;
using brknn::MovingObject;
using brknn::QuerySpec;
using brknn::RoadNetwork;
using brknn::RtreeMode;
using brknn::VertexId;
using nlohmann::ordered_json;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// --- shared option blocks ---------------------------------------------------

struct NetworkOptions {
    std::string gr;
    std::string co;
    std::string snapshot;
    std::string scale = "affine";

    void attach(CLI::App* cmd) {
        cmd->add_option("--gr", gr, "DIMACS distance graph (.gr)");
        cmd->add_option("--co", co, "DIMACS coordinate file (.co)");
        cmd->add_option("--net", snapshot, "binary network snapshot (alternative to --gr/--co)");
        cmd->add_option("--scale", scale,
                        "coordinate scaling: 'affine' (fit) or a numeric factor");
    }

    RoadNetwork load(double* out_seconds = nullptr) const {
        const auto t0 = std::chrono::steady_clock::now();
        RoadNetwork net;
        if (!snapshot.empty()) {
            net = brknn::load_snapshot_file(snapshot);
        } else if (!gr.empty() && !co.empty()) {
            brknn::CoordScaling scaling = brknn::CoordScaling::affine_fit();
            if (scale != "affine") {
                try {
                    scaling = brknn::CoordScaling::constant(std::stod(scale));
                } catch (const std::exception&) {
                    throw std::runtime_error("invalid --scale value: " + scale);
                }
            }
            net = brknn::load_dimacs_files(gr, co, scaling);
        } else {
            throw CLI::ValidationError("network input",
                                       "provide --net or both --gr and --co");
        }
        if (out_seconds != nullptr) {
            *out_seconds = seconds_since(t0);
        }
        return net;
    }
};

struct EngineOptions {
    bool no_cache = false;
    bool no_quick_verify = false;
    bool no_pruning = false;
    std::string rtree_mode = "mbc";
    double max_radius = 0.0;
    double tie_epsilon = 0.0;
    unsigned rtree_fanout = 16;
    unsigned parallel = 1;
    CLI::Option* max_radius_opt = nullptr;

    void attach(CLI::App* cmd) {
        cmd->add_flag("--no-cache", no_cache, "disable the cross-query distance cache");
        cmd->add_flag("--no-quick-verify", no_quick_verify,
                      "disable the Euclidean quick verification");
        cmd->add_flag("--no-pruning", no_pruning, "disable expansion pruning");
        cmd->add_option("--rtree-mode", rtree_mode, "index pruning discipline: mbc|mbr")
            ->check(CLI::IsMember({"mbc", "mbr"}));
        max_radius_opt =
            cmd->add_option("--max-radius", max_radius, "stop expansion past this distance");
        cmd->add_option("--tie-epsilon", tie_epsilon, "slack for strict pruning comparisons");
        cmd->add_option("--rtree-fanout", rtree_fanout, "facility index fanout")
            ->check(CLI::Range(2u, 1024u));
        cmd->add_option("--parallel", parallel, "worker threads for the batch")
            ->check(CLI::Range(1u, 256u));
    }

    EngineConfig config() const {
        EngineConfig cfg;
        cfg.cache_enabled = !no_cache;
        cfg.quick_verify_enabled = !no_quick_verify;
        cfg.pruning_enabled = !no_pruning;
        cfg.rtree_mode = rtree_mode == "mbr" ? RtreeMode::kMbr : RtreeMode::kMbc;
        if (max_radius_opt != nullptr && max_radius_opt->count() > 0) {
            cfg.max_search_radius = max_radius;
        }
        cfg.tie_epsilon = tie_epsilon;
        cfg.rtree_max_entries = rtree_fanout;
        return cfg;
    }
};

struct WorkloadFiles {
    std::string objects;
    std::string queries;
    std::string facilities;
    int k_override = 0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--objects", objects, "objects file")->required();
        cmd->add_option("--queries", queries, "queries file")->required();
        cmd->add_option("--facilities", facilities,
                        "facilities file (default: every vertex is a facility)");
        cmd->add_option("--k", k_override, "override the k from the queries file")
            ->check(CLI::PositiveNumber);
    }

    struct Loaded {
        std::vector<MovingObject> objects;
        QuerySpec spec;
    };

    Loaded load(const RoadNetwork& net) const {
        Loaded out;
        {
            std::ifstream in(objects);
            if (!in) {
                throw std::runtime_error("cannot open objects file: " + objects);
            }
            out.objects = brknn::workload::load_objects(in, net);
        }
        std::ifstream qin(queries);
        if (!qin) {
            throw std::runtime_error("cannot open queries file: " + queries);
        }
        const auto qf = brknn::workload::load_queries(qin, net);
        out.spec.query_facilities = qf.queries;
        out.spec.k = k_override > 0 ? k_override : qf.k;
        if (facilities.empty()) {
            out.spec.facilities.resize(net.vertex_count());
            for (std::size_t v = 0; v < net.vertex_count(); ++v) {
                out.spec.facilities[v] = static_cast<VertexId>(v);
            }
        } else {
            std::ifstream fin(facilities);
            if (!fin) {
                throw std::runtime_error("cannot open facilities file: " + facilities);
            }
            out.spec.facilities = brknn::workload::load_facilities(fin, net);
        }
        return out;
    }
};

// --- report helpers ----------------------------------------------------------

ordered_json network_json(const RoadNetwork& net) {
    return {{"vertices", net.vertex_count()},
            {"edges", net.edge_count()},
            {"metric_ok", net.metric_ok()},
            {"coordinate_scale", net.coordinate_scale()}};
}

ordered_json config_json(const EngineConfig& cfg, unsigned parallel) {
    ordered_json j{{"quick_verify", cfg.quick_verify_enabled},
                   {"cache", cfg.cache_enabled},
                   {"pruning", cfg.pruning_enabled},
                   {"rtree_mode", cfg.rtree_mode == RtreeMode::kMbc ? "mbc" : "mbr"},
                   {"tie_epsilon", cfg.tie_epsilon},
                   {"rtree_max_entries", cfg.rtree_max_entries},
                   {"parallel", parallel}};
    if (cfg.max_search_radius) {
        j["max_search_radius"] = *cfg.max_search_radius;
    } else {
        j["max_search_radius"] = nullptr;
    }
    return j;
}

ordered_json counters_json(const BatchCounters& c) {
    return {{"sssp_runs", c.sssp_runs},
            {"cache_hits", c.cache_hits},
            {"cache_misses", c.cache_misses},
            {"cache_hit_rate", c.cache_hit_rate},
            {"rtree_nodes_visited", c.rtree_nodes_visited},
            {"quick_verify_hits", c.quick_verify_hits},
            {"full_verifications", c.full_verifications},
            {"vertices_settled", c.vertices_settled},
            {"prune_probes", c.prune_probes},
            {"wall_time_seconds", c.wall_time_seconds}};
}

void print_counters_human(std::ostream& out, const BatchCounters& c, bool cache_enabled) {
    out << "query time:      " << c.wall_time_seconds << " s\n"
        << "sssp runs:       " << c.sssp_runs << "\n";
    if (cache_enabled) {
        out << "cache hit rate:  " << c.cache_hit_rate * 100.0 << " % (" << c.cache_hits << "/"
            << c.cache_hits + c.cache_misses << ")\n";
    } else {
        out << "cache hit rate:  n/a (cache disabled)\n";
    }
    out << "rtree nodes:     " << c.rtree_nodes_visited << "\n"
        << "quick accepts:   " << c.quick_verify_hits << "\n"
        << "fallback checks: " << c.full_verifications << "\n"
        << "settled:         " << c.vertices_settled << "\n"
        << "prune probes:    " << c.prune_probes << "\n";
}

void write_results_file(const std::string& path,
                        const std::vector<VertexId>& query_order,
                        const std::map<VertexId, std::vector<brknn::ObjectId>>& results) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open results file for writing: " + path);
    }
    for (VertexId q : query_order) {
        out << "r " << q + 1;
        for (brknn::ObjectId id : results.at(q)) {
            out << " " << id;
        }
        out << "\n";
    }
}

// --- subcommands --------------------------------------------------------------

struct GlobalFlags {
    bool json = false;
    std::uint64_t seed = 42;
};

int cmd_load(const NetworkOptions& netopt, const std::string& snapshot_out,
             double metric_tolerance, bool has_tolerance, const GlobalFlags& g) {
    double load_seconds = 0.0;
    RoadNetwork net = netopt.load(&load_seconds);
    const brknn::MetricReport report =
        has_tolerance ? brknn::validate_metric(net, metric_tolerance)
                      : brknn::validate_metric(net);
    if (!snapshot_out.empty()) {
        brknn::save_snapshot_file(net, snapshot_out);
    }
    if (g.json) {
        ordered_json j{{"command", "load"},
                       {"network", network_json(net)},
                       {"metric",
                        {{"tolerance", report.tolerance},
                         {"violations", report.violation_count},
                         {"worst_excess", report.worst_excess},
                         {"edges_checked", report.edges_checked}}},
                       {"timings", {{"load_seconds", load_seconds}}}};
        if (!snapshot_out.empty()) {
            j["snapshot"] = snapshot_out;
        }
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "vertices:        " << net.vertex_count() << "\n"
                  << "edges:           " << net.edge_count() << " (undirected)\n"
                  << "scale:           " << net.coordinate_scale() << "\n"
                  << "metric check:    " << report.violation_count << " violation(s) at tolerance "
                  << report.tolerance << "\n"
                  << "metric ok:       " << (net.metric_ok() ? "yes" : "no") << "\n";
        for (const auto& s : report.samples) {
            std::cout << "  violating edge (" << s.u + 1 << "," << s.v + 1 << "): weight "
                      << s.weight << " < euclidean " << s.euclid << "\n";
        }
        if (!snapshot_out.empty()) {
            std::cout << "snapshot:        " << snapshot_out << "\n";
        }
    }
    return 0;
}

int cmd_generate(const NetworkOptions& netopt, brknn::workload::WorkloadSpec ws,
                 double facility_fraction, bool length_weighted, const std::string& out_prefix,
                 const GlobalFlags& g) {
    RoadNetwork net = netopt.load();
    ws.seed = g.seed;
    ws.length_weighted_placement = length_weighted;
    if (facility_fraction < 1.0) {
        ws.facility_mode = brknn::workload::FacilityMode::kSample;
        ws.facility_fraction = facility_fraction;
    }
    const brknn::workload::Workload w = brknn::workload::generate(net, ws);

    const std::string objects_path = out_prefix + ".objects";
    const std::string queries_path = out_prefix + ".queries";
    {
        std::ofstream out(objects_path);
        if (!out) {
            throw std::runtime_error("cannot write " + objects_path);
        }
        brknn::workload::save_objects(out, w.objects);
    }
    {
        std::ofstream out(queries_path);
        if (!out) {
            throw std::runtime_error("cannot write " + queries_path);
        }
        brknn::workload::save_queries(out, w.spec.query_facilities, w.spec.k);
    }
    std::string facilities_path;
    if (ws.facility_mode == brknn::workload::FacilityMode::kSample) {
        facilities_path = out_prefix + ".facilities";
        std::ofstream out(facilities_path);
        if (!out) {
            throw std::runtime_error("cannot write " + facilities_path);
        }
        brknn::workload::save_facilities(out, w.spec.facilities);
    }
    if (g.json) {
        ordered_json j{{"command", "generate"},
                       {"seed", ws.seed},
                       {"objects", w.objects.size()},
                       {"queries", w.spec.query_facilities.size()},
                       {"k", w.spec.k},
                       {"facilities", w.spec.facilities.size()},
                       {"objects_file", objects_path},
                       {"queries_file", queries_path}};
        if (!facilities_path.empty()) {
            j["facilities_file"] = facilities_path;
        }
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "objects:    " << w.objects.size() << " -> " << objects_path << "\n"
                  << "queries:    " << w.spec.query_facilities.size() << " (k=" << w.spec.k
                  << ") -> " << queries_path << "\n"
                  << "facilities: " << w.spec.facilities.size();
        if (!facilities_path.empty()) {
            std::cout << " -> " << facilities_path;
        }
        std::cout << "\n";
    }
    return 0;
}

int cmd_query(const NetworkOptions& netopt, const WorkloadFiles& files,
              const EngineOptions& engopt, const std::string& out_path, const GlobalFlags& g) {
    double load_seconds = 0.0;
    const RoadNetwork net = netopt.load(&load_seconds);
    const auto loaded = files.load(net);

    const auto t0 = std::chrono::steady_clock::now();
    brknn::BatchEngine engine(net, loaded.spec, engopt.config());
    const double index_seconds = seconds_since(t0);

    const BatchResult result = engine.batch_rknn(loaded.objects, engopt.parallel);
    if (!out_path.empty()) {
        write_results_file(out_path, loaded.spec.query_facilities, result.results);
    }

    std::size_t total = 0;
    ordered_json per_query = ordered_json::array();
    for (VertexId q : loaded.spec.query_facilities) {
        const auto& ids = result.results.at(q);
        total += ids.size();
        per_query.push_back({{"vertex", q + 1}, {"results", ids.size()}});
    }

    if (g.json) {
        ordered_json j{{"command", "query"},
                       {"network", network_json(net)},
                       {"workload",
                        {{"objects", loaded.objects.size()},
                         {"queries", loaded.spec.query_facilities.size()},
                         {"k", loaded.spec.k},
                         {"facilities", loaded.spec.facilities.size()}}},
                       {"config", config_json(engine.config(), engopt.parallel)},
                       {"counters", counters_json(result.counters)},
                       {"timings",
                        {{"load_seconds", load_seconds},
                         {"index_build_seconds", index_seconds},
                         {"query_seconds", result.counters.wall_time_seconds}}},
                       {"total_result_objects", total},
                       {"per_query", per_query}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "queries:         " << loaded.spec.query_facilities.size()
                  << " (k=" << loaded.spec.k << ", objects=" << loaded.objects.size() << ")\n"
                  << "result objects:  " << total << "\n";
        print_counters_human(std::cout, result.counters, engine.config().cache_enabled);
        if (!out_path.empty()) {
            std::cout << "results file:    " << out_path << "\n";
        }
    }
    return 0;
}

int cmd_oracle(const NetworkOptions& netopt, const WorkloadFiles& files,
               const std::string& out_path, const GlobalFlags& g) {
    double load_seconds = 0.0;
    const RoadNetwork net = netopt.load(&load_seconds);
    const auto loaded = files.load(net);
    const auto t0 = std::chrono::steady_clock::now();
    const auto results = brknn::oracle::rknn_oracle(net, loaded.spec, loaded.objects);
    const double oracle_seconds = seconds_since(t0);
    if (!out_path.empty()) {
        write_results_file(out_path, loaded.spec.query_facilities, results);
    }
    std::size_t total = 0;
    for (const auto& [q, ids] : results) {
        total += ids.size();
    }
    if (g.json) {
        ordered_json j{{"command", "oracle"},
                       {"network", network_json(net)},
                       {"workload",
                        {{"objects", loaded.objects.size()},
                         {"queries", loaded.spec.query_facilities.size()},
                         {"k", loaded.spec.k},
                         {"facilities", loaded.spec.facilities.size()}}},
                       {"timings",
                        {{"load_seconds", load_seconds}, {"oracle_seconds", oracle_seconds}}},
                       {"total_result_objects", total}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "oracle result objects: " << total << " in " << oracle_seconds << " s\n";
        if (!out_path.empty()) {
            std::cout << "results file:          " << out_path << "\n";
        }
    }
    return 0;
}

int cmd_ablate(const NetworkOptions& netopt, const WorkloadFiles& files, unsigned parallel,
               const GlobalFlags& g) {
    const RoadNetwork net = netopt.load();
    const auto loaded = files.load(net);

    struct Variant {
        const char* name;
        EngineConfig config;
    };
    EngineConfig full;
    EngineConfig nocache;
    nocache.cache_enabled = false;
    EngineConfig noqv;
    noqv.quick_verify_enabled = false;
    EngineConfig mbr;
    mbr.rtree_mode = RtreeMode::kMbr;
    const Variant variants[] = {
        {"full", full}, {"nocache", nocache}, {"no_qv", noqv}, {"mbr", mbr}};

    std::map<VertexId, std::vector<brknn::ObjectId>> reference;
    ordered_json rows = ordered_json::array();
    std::ostringstream table;
    table << "variant    time_s      sssp_runs  hit_pct  r_nodes    quick_hits fallbacks\n";
    bool identical = true;
    for (const Variant& v : variants) {
        brknn::BatchEngine engine(net, loaded.spec, v.config);
        const BatchResult r = engine.batch_rknn(loaded.objects, parallel);
        if (reference.empty()) {
            reference = r.results;
        } else if (r.results != reference) {
            identical = false;
        }
        const BatchCounters& c = r.counters;
        char hit[32];
        if (v.config.cache_enabled) {
            std::snprintf(hit, sizeof(hit), "%.1f", c.cache_hit_rate * 100.0);
        } else {
            std::snprintf(hit, sizeof(hit), "n/a");
        }
        char rnodes[32];
        if (v.config.quick_verify_enabled) {
            std::snprintf(rnodes, sizeof(rnodes), "%llu",
                          static_cast<unsigned long long>(c.rtree_nodes_visited));
        } else {
            std::snprintf(rnodes, sizeof(rnodes), "n/a");
        }
        char line[256];
        std::snprintf(line, sizeof(line), "%-10s %-11.6f %-10llu %-8s %-10s %-10llu %llu\n",
                      v.name, c.wall_time_seconds,
                      static_cast<unsigned long long>(c.sssp_runs), hit, rnodes,
                      static_cast<unsigned long long>(c.quick_verify_hits),
                      static_cast<unsigned long long>(c.full_verifications));
        table << line;
        rows.push_back({{"variant", v.name},
                        {"counters", counters_json(c)},
                        {"cache_enabled", v.config.cache_enabled},
                        {"quick_verify_enabled", v.config.quick_verify_enabled}});
    }
    if (g.json) {
        ordered_json j{{"command", "ablate"},
                       {"network", network_json(net)},
                       {"identical_results", identical},
                       {"variants", rows}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << table.str();
        std::cout << "identical results across variants: " << (identical ? "yes" : "NO") << "\n";
    }
    if (!identical) {
        std::cerr << "error: ablation variants disagree on result sets\n";
        return 2;
    }
    return 0;
}

int cmd_sweep(const NetworkOptions& netopt, const std::string& axis,
              const std::vector<std::uint64_t>& values, brknn::workload::WorkloadSpec base,
              unsigned parallel, const std::string& out_path, const GlobalFlags& g) {
    const RoadNetwork net = netopt.load();
    base.seed = g.seed;

    std::ostringstream csv;
    csv << "axis,value,time_s,sssp_runs,cache_hits,cache_misses,cache_hit_rate,"
           "rtree_nodes_visited,quick_verify_hits,full_verifications,vertices_settled,"
           "prune_probes,result_objects\n";
    for (std::uint64_t value : values) {
        brknn::workload::WorkloadSpec ws = base;
        if (axis == "batch_size") {
            ws.batch_size = value;
        } else if (axis == "k") {
            ws.k = static_cast<int>(value);
        } else { // num_objects
            ws.num_objects = value;
        }
        const auto w = brknn::workload::generate(net, ws);
        brknn::BatchEngine engine(net, w.spec, EngineConfig{});
        const BatchResult r = engine.batch_rknn(w.objects, parallel);
        std::size_t total = 0;
        for (const auto& [q, ids] : r.results) {
            total += ids.size();
        }
        const BatchCounters& c = r.counters;
        csv << axis << "," << value << "," << c.wall_time_seconds << "," << c.sssp_runs << ","
            << c.cache_hits << "," << c.cache_misses << "," << c.cache_hit_rate << ","
            << c.rtree_nodes_visited << "," << c.quick_verify_hits << ","
            << c.full_verifications << "," << c.vertices_settled << "," << c.prune_probes << ","
            << total << "\n";
    }
    if (out_path.empty()) {
        std::cout << csv.str();
    } else {
        std::ofstream out(out_path);
        if (!out) {
            throw std::runtime_error("cannot write " + out_path);
        }
        out << csv.str();
        if (!g.json) {
            std::cout << "sweep written to " << out_path << "\n";
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"batch reverse-k-nearest-neighbor query engine for road networks"};
    app.require_subcommand(1);

    GlobalFlags g;
    app.add_flag("--json", g.json, "emit machine-readable JSON reports");
    app.add_option("--seed", g.seed, "seed for workload generation");

    // load
    auto* load = app.add_subcommand("load", "parse a network and run the metric check");
    NetworkOptions load_net;
    load_net.attach(load);
    std::string snapshot_out;
    load->add_option("--snapshot-out", snapshot_out, "write a binary snapshot for fast reload");
    double metric_tolerance = 0.0;
    auto* tol_opt = load->add_option("--metric-tolerance", metric_tolerance,
                                     "absolute tolerance for the metric check");

    // generate
    auto* gen = app.add_subcommand("generate", "create a seeded random workload");
    NetworkOptions gen_net;
    gen_net.attach(gen);
    brknn::workload::WorkloadSpec gen_ws;
    gen->add_option("--n-objects", gen_ws.num_objects, "number of moving objects")
        ->capture_default_str();
    gen->add_option("--batch-size", gen_ws.batch_size, "number of query facilities")
        ->capture_default_str();
    gen->add_option("--k", gen_ws.k, "neighborhood size")->capture_default_str();
    double facility_fraction = 1.0;
    gen->add_option("--facility-fraction", facility_fraction,
                    "sample this fraction of vertices as facilities (default: all)")
        ->check(CLI::Range(0.0, 1.0));
    bool length_weighted = false;
    gen->add_flag("--length-weighted", length_weighted,
                  "place objects proportionally to edge length");
    std::string gen_out;
    gen->add_option("--out", gen_out, "output path prefix")->required();

    // query
    auto* query = app.add_subcommand("query", "run a batch of reverse-kNN queries");
    NetworkOptions query_net;
    query_net.attach(query);
    WorkloadFiles query_files;
    query_files.attach(query);
    EngineOptions query_eng;
    query_eng.attach(query);
    std::string query_out;
    query->add_option("--out", query_out, "results file (r <facility> <object ids...>)");

    // oracle
    auto* orc = app.add_subcommand("oracle", "brute-force reference answers");
    NetworkOptions orc_net;
    orc_net.attach(orc);
    WorkloadFiles orc_files;
    orc_files.attach(orc);
    std::string orc_out;
    orc->add_option("--out", orc_out, "results file (same format as query)");

    // ablate
    auto* abl = app.add_subcommand("ablate", "compare full/nocache/no_qv/mbr variants");
    NetworkOptions abl_net;
    abl_net.attach(abl);
    WorkloadFiles abl_files;
    abl_files.attach(abl);
    unsigned abl_parallel = 1;
    abl->add_option("--parallel", abl_parallel, "worker threads")->check(CLI::Range(1u, 256u));

    // sweep
    auto* sweep = app.add_subcommand("sweep", "run one axis of workload sizes, emit CSV");
    NetworkOptions sweep_net;
    sweep_net.attach(sweep);
    std::string sweep_axis;
    sweep->add_option("--axis", sweep_axis, "batch_size|k|num_objects")
        ->required()
        ->check(CLI::IsMember({"batch_size", "k", "num_objects"}));
    std::vector<std::uint64_t> sweep_values;
    sweep->add_option("--values", sweep_values, "axis values")->required()->delimiter(',');
    brknn::workload::WorkloadSpec sweep_ws;
    sweep->add_option("--n-objects", sweep_ws.num_objects, "base object count")
        ->capture_default_str();
    sweep->add_option("--batch-size", sweep_ws.batch_size, "base batch size")
        ->capture_default_str();
    sweep->add_option("--k", sweep_ws.k, "base k")->capture_default_str();
    unsigned sweep_parallel = 1;
    sweep->add_option("--parallel", sweep_parallel, "worker threads")->check(CLI::Range(1u, 256u));
    std::string sweep_out;
    sweep->add_option("--out", sweep_out, "CSV path (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (load->parsed()) {
            return cmd_load(load_net, snapshot_out, metric_tolerance, tol_opt->count() > 0, g);
        }
        if (gen->parsed()) {
            return cmd_generate(gen_net, gen_ws, facility_fraction, length_weighted, gen_out, g);
        }
        if (query->parsed()) {
            return cmd_query(query_net, query_files, query_eng, query_out, g);
        }
        if (orc->parsed()) {
            return cmd_oracle(orc_net, orc_files, orc_out, g);
        }
        if (abl->parsed()) {
            return cmd_ablate(abl_net, abl_files, abl_parallel, g);
        }
        if (sweep->parsed()) {
            return cmd_sweep(sweep_net, sweep_axis, sweep_values, sweep_ws, sweep_parallel,
                             sweep_out, g);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
