#include "brknn/road_network.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace brknn {

namespace {

std::uint64_t edge_key(VertexId a, VertexId b) {
    if (a > b) {
        std::swap(a, b);
    }
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

[[noreturn]] void fail(const std::string& message, std::size_t line) {
    throw ParseError(message, line);
}

// One token reader shared by the .gr and .co parsers. Keeps the current line
// number for error messages.
struct LineScanner {
    explicit LineScanner(std::istream& s) : in(s) {}

    std::istream& in;
    std::size_t line_number = 0;
    std::string line;

    bool next_line() {
        while (std::getline(in, line)) {
            ++line_number;
            if (!line.empty() && line.back() == '\r') {
                line.pop_back();
            }
            if (line.empty()) {
                continue;
            }
            return true;
        }
        return false;
    }
};

} // namespace

ParseError::ParseError(const std::string& message, std::size_t line_number)
    : std::runtime_error("line " + std::to_string(line_number) + ": " + message),
      line(line_number) {}

void RoadNetwork::build_adjacency() {
    adjacency_offsets_.assign(coords_.size() + 1, 0);
    for (const Edge& e : edges_) {
        ++adjacency_offsets_[e.u + 1];
        ++adjacency_offsets_[e.v + 1];
    }
    for (std::size_t i = 1; i < adjacency_offsets_.size(); ++i) {
        adjacency_offsets_[i] += adjacency_offsets_[i - 1];
    }
    adjacency_.resize(adjacency_offsets_.back());
    std::vector<std::uint32_t> cursor(adjacency_offsets_.begin(), adjacency_offsets_.end() - 1);
    edge_lookup_.clear();
    edge_lookup_.reserve(edges_.size() * 2);
    max_weight_ = 0.0;
    for (EdgeId id = 0; id < edges_.size(); ++id) {
        const Edge& e = edges_[id];
        adjacency_[cursor[e.u]++] = {e.v, e.weight, id};
        adjacency_[cursor[e.v]++] = {e.u, e.weight, id};
        edge_lookup_.emplace(edge_key(e.u, e.v), id);
        max_weight_ = std::max(max_weight_, e.weight);
    }
}

RoadNetwork RoadNetwork::from_parts(std::vector<Point2D> coords, const std::vector<Edge>& edges) {
    RoadNetwork net;
    const std::size_t n = coords.size();
    for (const Point2D& p : coords) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
            throw std::invalid_argument("non-finite vertex coordinate");
        }
    }
    net.coords_ = std::move(coords);

    std::unordered_map<std::uint64_t, double> dedup;
    dedup.reserve(edges.size());
    std::vector<std::uint64_t> order;
    order.reserve(edges.size());
    for (const Edge& e : edges) {
        if (e.u >= n || e.v >= n) {
            throw std::invalid_argument("edge endpoint out of range");
        }
        if (e.u == e.v) {
            throw std::invalid_argument("self-loop edge");
        }
        if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
            throw std::invalid_argument("edge weight must be positive and finite");
        }
        const std::uint64_t key = edge_key(e.u, e.v);
        auto [it, inserted] = dedup.emplace(key, e.weight);
        if (inserted) {
            order.push_back(key);
        } else {
            it->second = std::min(it->second, e.weight);
        }
    }
    net.edges_.reserve(order.size());
    for (std::uint64_t key : order) {
        net.edges_.push_back({static_cast<VertexId>(key >> 32),
                              static_cast<VertexId>(key & 0xffffffffu), dedup[key]});
    }
    // Canonical order keeps serialization independent of input edge order.
    std::sort(net.edges_.begin(), net.edges_.end(), [](const Edge& a, const Edge& b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    net.build_adjacency();
    validate_metric(net);
    return net;
}

std::span<const AdjacencyEntry> RoadNetwork::neighbors(VertexId v) const {
    if (v >= coords_.size()) {
        throw std::out_of_range("vertex id out of range");
    }
    return {adjacency_.data() + adjacency_offsets_[v],
            adjacency_.data() + adjacency_offsets_[v + 1]};
}

const Edge* RoadNetwork::find_edge(VertexId a, VertexId b) const {
    const auto it = edge_lookup_.find(edge_key(a, b));
    return it == edge_lookup_.end() ? nullptr : &edges_[it->second];
}

EdgeId RoadNetwork::edge_id(VertexId a, VertexId b) const {
    const auto it = edge_lookup_.find(edge_key(a, b));
    return it == edge_lookup_.end() ? kInvalidEdge : it->second;
}

double default_metric_tolerance(const RoadNetwork& net) {
    return 1e-6 * net.max_edge_weight();
}

MetricReport validate_metric(RoadNetwork& net, double tolerance) {
    MetricReport report;
    report.tolerance = tolerance;
    for (const Edge& e : net.edges_) {
        const double ed = euclidean(net.coords_[e.u], net.coords_[e.v]);
        ++report.edges_checked;
        if (e.weight < ed - tolerance) {
            ++report.violation_count;
            report.worst_excess = std::max(report.worst_excess, ed - e.weight);
            if (report.samples.size() < MetricReport::kMaxSamples) {
                report.samples.push_back({e.u, e.v, e.weight, ed});
            }
        }
    }
    net.metric_ok_ = report.ok();
    return report;
}

MetricReport validate_metric(RoadNetwork& net) {
    return validate_metric(net, default_metric_tolerance(net));
}

namespace {

struct RawGraph {
    std::size_t declared_vertices = 0;
    std::size_t declared_arcs = 0;
    std::vector<Edge> edges; // already deduplicated, not yet canonicalized
};

RawGraph parse_gr(std::istream& in) {
    RawGraph g;
    LineScanner sc{in};
    bool have_header = false;
    std::size_t arcs_read = 0;
    std::unordered_map<std::uint64_t, std::size_t> seen; // key -> index in edges
    while (sc.next_line()) {
        const char tag = sc.line[0];
        if (tag == 'c') {
            continue;
        }
        std::istringstream ls(sc.line);
        if (tag == 'p') {
            std::string p, sp;
            std::size_t n = 0, m = 0;
            if (!(ls >> p >> sp >> n >> m) || sp != "sp") {
                fail("malformed problem line, expected 'p sp <n> <m>'", sc.line_number);
            }
            if (have_header) {
                fail("duplicate problem line", sc.line_number);
            }
            have_header = true;
            g.declared_vertices = n;
            g.declared_arcs = m;
            g.edges.reserve(m / 2 + 1);
        } else if (tag == 'a') {
            if (!have_header) {
                fail("arc line before problem line", sc.line_number);
            }
            std::string a;
            long long u = 0, v = 0;
            double w = 0.0;
            if (!(ls >> a >> u >> v >> w)) {
                fail("malformed arc line, expected 'a <u> <v> <w>'", sc.line_number);
            }
            if (u < 1 || v < 1 || static_cast<std::size_t>(u) > g.declared_vertices ||
                static_cast<std::size_t>(v) > g.declared_vertices) {
                fail("arc endpoint out of declared vertex range", sc.line_number);
            }
            if (u == v) {
                fail("self-loop arc", sc.line_number);
            }
            if (!(w > 0.0) || !std::isfinite(w)) {
                fail("arc weight must be positive", sc.line_number);
            }
            ++arcs_read;
            const auto uu = static_cast<VertexId>(u - 1);
            const auto vv = static_cast<VertexId>(v - 1);
            const std::uint64_t key = edge_key(uu, vv);
            auto [it, inserted] = seen.emplace(key, g.edges.size());
            if (inserted) {
                g.edges.push_back({std::min(uu, vv), std::max(uu, vv), w});
            } else {
                g.edges[it->second].weight = std::min(g.edges[it->second].weight, w);
            }
        } else {
            fail("unrecognized line type '" + std::string(1, tag) + "'", sc.line_number);
        }
    }
    if (!have_header) {
        fail("missing problem line", sc.line_number);
    }
    if (arcs_read != g.declared_arcs) {
        fail("arc count mismatch: header declares " + std::to_string(g.declared_arcs) +
                 ", file contains " + std::to_string(arcs_read),
             sc.line_number);
    }
    return g;
}

std::vector<Point2D> parse_co(std::istream& in, std::size_t expected_vertices) {
    LineScanner sc{in};
    std::vector<Point2D> coords(expected_vertices);
    std::vector<char> seen(expected_vertices, 0);
    bool have_header = false;
    while (sc.next_line()) {
        const char tag = sc.line[0];
        if (tag == 'c') {
            continue;
        }
        std::istringstream ls(sc.line);
        if (tag == 'p') {
            std::string p, aux, sp, co;
            std::size_t n = 0;
            if (!(ls >> p >> aux >> sp >> co >> n) || aux != "aux" || sp != "sp" || co != "co") {
                fail("malformed problem line, expected 'p aux sp co <n>'", sc.line_number);
            }
            if (n != expected_vertices) {
                fail("coordinate file declares " + std::to_string(n) + " vertices, graph has " +
                         std::to_string(expected_vertices),
                     sc.line_number);
            }
            have_header = true;
        } else if (tag == 'v') {
            if (!have_header) {
                fail("vertex line before problem line", sc.line_number);
            }
            std::string v;
            long long id = 0;
            double x = 0.0, y = 0.0;
            if (!(ls >> v >> id >> x >> y)) {
                fail("malformed vertex line, expected 'v <id> <x> <y>'", sc.line_number);
            }
            if (id < 1 || static_cast<std::size_t>(id) > expected_vertices) {
                fail("vertex id out of range", sc.line_number);
            }
            if (seen[id - 1]) {
                fail("duplicate coordinates for vertex " + std::to_string(id), sc.line_number);
            }
            seen[id - 1] = 1;
            coords[id - 1] = {x, y};
        } else {
            fail("unrecognized line type '" + std::string(1, tag) + "'", sc.line_number);
        }
    }
    if (!have_header) {
        fail("missing problem line", sc.line_number);
    }
    for (std::size_t i = 0; i < expected_vertices; ++i) {
        if (!seen[i]) {
            throw std::runtime_error("missing coordinates for vertex " + std::to_string(i + 1));
        }
    }
    return coords;
}

double resolve_scale(const CoordScaling& scaling, const std::vector<Point2D>& coords,
                     const std::vector<Edge>& edges) {
    if (scaling.mode == CoordScaling::Mode::kConstant) {
        return scaling.factor;
    }
    // Least-squares factor, then shrink by the worst violation ratio so the
    // scaled Euclidean span never exceeds the edge weight.
    double num = 0.0, den = 0.0;
    for (const Edge& e : edges) {
        const double ed = euclidean(coords[e.u], coords[e.v]);
        num += e.weight * ed;
        den += ed * ed;
    }
    if (den <= 0.0) {
        return 1.0; // all coordinates coincide; scale is irrelevant
    }
    double s = num / den;
    double worst_ratio = 0.0;
    for (const Edge& e : edges) {
        const double ed = euclidean(coords[e.u], coords[e.v]);
        if (ed > 0.0) {
            worst_ratio = std::max(worst_ratio, s * ed / e.weight);
        }
    }
    if (worst_ratio > 1.0) {
        s /= worst_ratio;
    }
    return s;
}

} // namespace

RoadNetwork load_dimacs(std::istream& gr, std::istream& co, const CoordScaling& scaling) {
    RawGraph g = parse_gr(gr);
    std::vector<Point2D> coords = parse_co(co, g.declared_vertices);
    const double s = resolve_scale(scaling, coords, g.edges);
    for (Point2D& p : coords) {
        p.x *= s;
        p.y *= s;
    }
    RoadNetwork net = RoadNetwork::from_parts(std::move(coords), g.edges);
    net.scale_ = s;
    return net;
}

RoadNetwork load_dimacs_files(const std::string& gr_path, const std::string& co_path,
                              const CoordScaling& scaling) {
    std::ifstream gr(gr_path);
    if (!gr) {
        throw std::runtime_error("cannot open graph file: " + gr_path);
    }
    std::ifstream co(co_path);
    if (!co) {
        throw std::runtime_error("cannot open coordinate file: " + co_path);
    }
    return load_dimacs(gr, co, scaling);
}

namespace {

constexpr char kSnapshotMagic[8] = {'B', 'R', 'K', 'N', 'N', 'E', 'T', '1'};

void put_u64(std::ostream& out, std::uint64_t v) {
    char buf[8];
    for (int i = 0; i < 8; ++i) {
        buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    }
    out.write(buf, 8);
}

void put_f64(std::ostream& out, double d) {
    put_u64(out, std::bit_cast<std::uint64_t>(d));
}

std::uint64_t get_u64(std::istream& in) {
    char buf[8];
    in.read(buf, 8);
    if (!in) {
        throw std::runtime_error("truncated snapshot");
    }
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) {
        v = (v << 8) | static_cast<std::uint8_t>(buf[i]);
    }
    return v;
}

double get_f64(std::istream& in) {
    return std::bit_cast<double>(get_u64(in));
}

} // namespace

void save_snapshot(const RoadNetwork& net, std::ostream& out) {
    out.write(kSnapshotMagic, sizeof(kSnapshotMagic));
    put_u64(out, net.vertex_count());
    put_u64(out, net.edge_count());
    put_f64(out, net.coordinate_scale());
    put_u64(out, net.metric_ok() ? 1 : 0);
    for (const Point2D& p : net.positions()) {
        put_f64(out, p.x);
        put_f64(out, p.y);
    }
    for (const Edge& e : net.edges()) {
        put_u64(out, e.u);
        put_u64(out, e.v);
        put_f64(out, e.weight);
    }
}

RoadNetwork load_snapshot(std::istream& in) {
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kSnapshotMagic, sizeof(magic)) != 0) {
        throw std::runtime_error("not a road-network snapshot (bad magic)");
    }
    const std::uint64_t n = get_u64(in);
    const std::uint64_t m = get_u64(in);
    const double scale = get_f64(in);
    const bool metric_ok = get_u64(in) != 0;
    std::vector<Point2D> coords(n);
    for (auto& p : coords) {
        p.x = get_f64(in);
        p.y = get_f64(in);
    }
    std::vector<Edge> edges(m);
    for (auto& e : edges) {
        e.u = static_cast<VertexId>(get_u64(in));
        e.v = static_cast<VertexId>(get_u64(in));
        e.weight = get_f64(in);
    }
    RoadNetwork net = RoadNetwork::from_parts(std::move(coords), edges);
    net.scale_ = scale;
    net.metric_ok_ = metric_ok;
    return net;
}

void save_snapshot_file(const RoadNetwork& net, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open snapshot for writing: " + path);
    }
    save_snapshot(net, out);
}

RoadNetwork load_snapshot_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open snapshot: " + path);
    }
    return load_snapshot(in);
}

} // namespace brknn
