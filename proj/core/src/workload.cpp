#include "brknn/workload.hpp"

#include "brknn/pcg32.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace brknn::workload {

namespace {

// Distinct stream selectors keep the three sampling phases independent while
// staying fully determined by the one user seed.
constexpr std::uint64_t kFacilityStream = 0x01;
constexpr std::uint64_t kObjectStream = 0x02;
constexpr std::uint64_t kQueryStream = 0x03;

// Partial Fisher-Yates: the first `take` slots of `pool` end up holding a
// uniform sample without replacement.
template <typename T>
void sample_prefix(std::vector<T>& pool, std::size_t take, Pcg32& rng) {
    for (std::size_t i = 0; i < take; ++i) {
        const std::size_t j =
            i + rng.next_bounded(static_cast<std::uint32_t>(pool.size() - i));
        std::swap(pool[i], pool[j]);
    }
}

[[noreturn]] void fail(const std::string& message, std::size_t line) {
    throw ParseError(message, line);
}

} // namespace

Workload generate(const RoadNetwork& net, const WorkloadSpec& ws) {
    if (net.vertex_count() == 0 || net.edge_count() == 0) {
        throw std::invalid_argument("cannot generate a workload on an empty network");
    }

    Workload out;
    out.spec.k = ws.k;
    if (ws.k < 1) {
        throw std::invalid_argument("k must be at least 1");
    }

    // Facilities first.
    if (ws.facility_mode == FacilityMode::kAllVertices) {
        out.spec.facilities.resize(net.vertex_count());
        std::iota(out.spec.facilities.begin(), out.spec.facilities.end(), VertexId{0});
    } else {
        if (!(ws.facility_fraction > 0.0) || ws.facility_fraction > 1.0) {
            throw std::invalid_argument("facility fraction must be in (0, 1]");
        }
        const auto want = std::max<std::size_t>(
            1, static_cast<std::size_t>(
                   std::llround(ws.facility_fraction * static_cast<double>(net.vertex_count()))));
        std::vector<VertexId> pool(net.vertex_count());
        std::iota(pool.begin(), pool.end(), VertexId{0});
        Pcg32 rng(ws.seed, kFacilityStream);
        sample_prefix(pool, want, rng);
        out.spec.facilities.assign(pool.begin(), pool.begin() + want);
        std::sort(out.spec.facilities.begin(), out.spec.facilities.end());
    }
    if (ws.batch_size > out.spec.facilities.size()) {
        throw std::invalid_argument("batch size exceeds the facility count");
    }

    // Objects: edge picked uniformly (or by length), offset uniform in [0, w).
    {
        Pcg32 rng(ws.seed, kObjectStream);
        out.objects.reserve(ws.num_objects);
        const auto& edges = net.edges();
        std::vector<double> prefix;
        if (ws.length_weighted_placement) {
            prefix.resize(edges.size());
            double acc = 0.0;
            for (std::size_t i = 0; i < edges.size(); ++i) {
                acc += edges[i].weight;
                prefix[i] = acc;
            }
        }
        for (std::size_t i = 0; i < ws.num_objects; ++i) {
            std::size_t e;
            if (ws.length_weighted_placement) {
                const double target = rng.next_double() * prefix.back();
                e = static_cast<std::size_t>(
                    std::lower_bound(prefix.begin(), prefix.end(), target) - prefix.begin());
                e = std::min(e, edges.size() - 1);
            } else {
                e = rng.next_bounded(static_cast<std::uint32_t>(edges.size()));
            }
            const double offset = rng.next_double() * edges[e].weight;
            out.objects.push_back(
                {static_cast<ObjectId>(i), edges[e].u, edges[e].v, offset});
        }
    }

    // Query batch: sampled from the facilities without replacement.
    {
        Pcg32 rng(ws.seed, kQueryStream);
        std::vector<VertexId> pool = out.spec.facilities;
        sample_prefix(pool, ws.batch_size, rng);
        out.spec.query_facilities.assign(pool.begin(), pool.begin() + ws.batch_size);
    }
    return out;
}

void save_objects(std::ostream& out, std::span<const MovingObject> objects) {
    out << "objects " << objects.size() << "\n";
    char buf[64];
    for (const MovingObject& m : objects) {
        std::snprintf(buf, sizeof(buf), "%.17g", m.offset);
        out << "o " << m.id << " " << m.u + 1 << " " << m.v + 1 << " " << buf << "\n";
    }
}

std::vector<MovingObject> load_objects(std::istream& in, const RoadNetwork& net) {
    std::string line;
    std::size_t line_number = 0;
    if (!std::getline(in, line)) {
        fail("empty objects file", 1);
    }
    ++line_number;
    std::istringstream header(line);
    std::string word;
    std::size_t count = 0;
    if (!(header >> word >> count) || word != "objects") {
        fail("expected header 'objects <count>'", line_number);
    }
    std::vector<MovingObject> objects;
    objects.reserve(count);
    std::unordered_set<ObjectId> ids;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty()) {
            continue;
        }
        std::istringstream ls(line);
        std::string tag;
        long long id = 0, u = 0, v = 0;
        double offset = 0.0;
        if (!(ls >> tag >> id >> u >> v >> offset) || tag != "o") {
            fail("expected 'o <id> <u> <v> <offset>'", line_number);
        }
        if (id < 0) {
            fail("object id must be non-negative", line_number);
        }
        if (u < 1 || v < 1 || static_cast<std::size_t>(u) > net.vertex_count() ||
            static_cast<std::size_t>(v) > net.vertex_count()) {
            fail("vertex id out of range", line_number);
        }
        if (u >= v) {
            fail("object edge must be written with u < v", line_number);
        }
        const auto uu = static_cast<VertexId>(u - 1);
        const auto vv = static_cast<VertexId>(v - 1);
        const Edge* e = net.find_edge(uu, vv);
        if (e == nullptr) {
            fail("object references a non-existent edge", line_number);
        }
        if (!(offset >= 0.0) || offset > e->weight) {
            fail("offset outside [0, edge weight]", line_number);
        }
        if (!ids.insert(static_cast<ObjectId>(id)).second) {
            fail("duplicate object id", line_number);
        }
        objects.push_back({static_cast<ObjectId>(id), uu, vv, offset});
    }
    if (objects.size() != count) {
        fail("object count mismatch: header declares " + std::to_string(count) + ", file has " +
                 std::to_string(objects.size()),
             line_number);
    }
    return objects;
}

void save_queries(std::ostream& out, std::span<const VertexId> queries, int k) {
    out << "queries " << queries.size() << " k=" << k << "\n";
    for (VertexId q : queries) {
        out << "q " << q + 1 << "\n";
    }
}

QueryFile load_queries(std::istream& in, const RoadNetwork& net) {
    std::string line;
    std::size_t line_number = 0;
    if (!std::getline(in, line)) {
        fail("empty queries file", 1);
    }
    ++line_number;
    std::istringstream header(line);
    std::string word, kspec;
    std::size_t count = 0;
    if (!(header >> word >> count >> kspec) || word != "queries" || kspec.rfind("k=", 0) != 0) {
        fail("expected header 'queries <count> k=<k>'", line_number);
    }
    QueryFile qf;
    try {
        qf.k = std::stoi(kspec.substr(2));
    } catch (const std::exception&) {
        fail("malformed k value", line_number);
    }
    if (qf.k < 1) {
        fail("k must be at least 1", line_number);
    }
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty()) {
            continue;
        }
        std::istringstream ls(line);
        std::string tag;
        long long id = 0;
        if (!(ls >> tag >> id) || tag != "q") {
            fail("expected 'q <vertex-id>'", line_number);
        }
        if (id < 1 || static_cast<std::size_t>(id) > net.vertex_count()) {
            fail("vertex id out of range", line_number);
        }
        qf.queries.push_back(static_cast<VertexId>(id - 1));
    }
    if (qf.queries.size() != count) {
        fail("query count mismatch: header declares " + std::to_string(count) + ", file has " +
                 std::to_string(qf.queries.size()),
             line_number);
    }
    return qf;
}

void save_facilities(std::ostream& out, std::span<const VertexId> facilities) {
    out << "facilities " << facilities.size() << "\n";
    for (VertexId f : facilities) {
        out << "f " << f + 1 << "\n";
    }
}

std::vector<VertexId> load_facilities(std::istream& in, const RoadNetwork& net) {
    std::string line;
    std::size_t line_number = 0;
    if (!std::getline(in, line)) {
        fail("empty facilities file", 1);
    }
    ++line_number;
    std::istringstream header(line);
    std::string word;
    std::size_t count = 0;
    if (!(header >> word >> count) || word != "facilities") {
        fail("expected header 'facilities <count>'", line_number);
    }
    std::vector<VertexId> facilities;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty()) {
            continue;
        }
        std::istringstream ls(line);
        std::string tag;
        long long id = 0;
        if (!(ls >> tag >> id) || tag != "f") {
            fail("expected 'f <vertex-id>'", line_number);
        }
        if (id < 1 || static_cast<std::size_t>(id) > net.vertex_count()) {
            fail("vertex id out of range", line_number);
        }
        facilities.push_back(static_cast<VertexId>(id - 1));
    }
    if (facilities.size() != count) {
        fail("facility count mismatch", line_number);
    }
    std::sort(facilities.begin(), facilities.end());
    facilities.erase(std::unique(facilities.begin(), facilities.end()), facilities.end());
    return facilities;
}

} // namespace brknn::workload
