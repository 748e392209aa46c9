#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "brknn/pcg32.hpp"
#include "brknn/workload.hpp"
#include "test_util.hpp"

#include <cmath>
#include <sstream>

using namespace brknn;
using namespace brknn::workload;

namespace {

bool same_objects(const std::vector<MovingObject>& a, const std::vector<MovingObject>& b) {
    if (a.size() != b.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].id != b[i].id || a[i].u != b[i].u || a[i].v != b[i].v ||
            a[i].offset != b[i].offset) {
            return false;
        }
    }
    return true;
}

// Upper chi-square quantile via the Wilson-Hilferty cube approximation.
double chi_square_critical(double dof, double z) {
    const double a = 2.0 / (9.0 * dof);
    const double c = 1.0 - a + z * std::sqrt(a);
    return dof * c * c * c;
}

} // namespace

TEST_CASE("pcg32 reference stream") {
    // First outputs of the canonical generator for seed 42 / stream 54.
    Pcg32 rng(42, 54);
    const std::uint32_t expected[] = {0xa15c02b7u, 0x7b47f409u, 0xba1d3330u,
                                      0x83d2f293u, 0xbfa4784bu, 0xcbed606eu};
    for (std::uint32_t e : expected) {
        CHECK(rng.next() == e);
    }
    Pcg32 bounded(1, 2);
    for (int i = 0; i < 1000; ++i) {
        CHECK(bounded.next_bounded(17) < 17);
        const double d = bounded.next_double();
        CHECK(d >= 0.0);
        CHECK(d < 1.0);
    }
}

TEST_CASE("default workload parameters") {
    const WorkloadSpec ws;
    CHECK(ws.num_objects == 100000);
    CHECK(ws.batch_size == 100);
    CHECK(ws.k == 10);
    CHECK(ws.facility_mode == FacilityMode::kAllVertices);
    CHECK_FALSE(ws.length_weighted_placement);
}

TEST_CASE("generation is deterministic under the seed") {
    const RoadNetwork net = testutil::grid_network(8, 8, 1);
    WorkloadSpec ws;
    ws.seed = 99;
    ws.num_objects = 500;
    ws.batch_size = 10;
    ws.k = 3;
    const Workload a = generate(net, ws);
    const Workload b = generate(net, ws);
    CHECK(same_objects(a.objects, b.objects));
    CHECK(a.spec.query_facilities == b.spec.query_facilities);
    CHECK(a.spec.facilities == b.spec.facilities);

    ws.seed = 100;
    const Workload c = generate(net, ws);
    CHECK_FALSE(same_objects(a.objects, c.objects));
}

TEST_CASE("generated workloads respect the requested sizes") {
    const RoadNetwork net = testutil::grid_network(12, 12, 2);
    WorkloadSpec ws;
    ws.num_objects = 2000;
    ws.batch_size = 25;
    ws.k = 10;
    const Workload w = generate(net, ws);
    CHECK(w.objects.size() == 2000);
    CHECK(w.spec.query_facilities.size() == 25);
    CHECK(w.spec.k == 10);
    CHECK(w.spec.facilities.size() == net.vertex_count());
    for (const MovingObject& m : w.objects) {
        const Edge* e = net.find_edge(m.u, m.v);
        REQUIRE(e != nullptr);
        CHECK(m.offset >= 0.0);
        CHECK(m.offset <= e->weight);
    }

    ws.num_objects = 0;
    CHECK(generate(net, ws).objects.empty());

    ws.batch_size = net.vertex_count() + 1;
    CHECK_THROWS_AS(generate(net, ws), std::invalid_argument);
}

TEST_CASE("sampled facility mode") {
    const RoadNetwork net = testutil::grid_network(10, 10, 3);
    WorkloadSpec ws;
    ws.facility_mode = FacilityMode::kSample;
    ws.facility_fraction = 0.4;
    ws.num_objects = 100;
    ws.batch_size = 5;
    const Workload w = generate(net, ws);
    CHECK(w.spec.facilities.size() == 40);
    CHECK(std::is_sorted(w.spec.facilities.begin(), w.spec.facilities.end()));
    for (VertexId q : w.spec.query_facilities) {
        CHECK(std::binary_search(w.spec.facilities.begin(), w.spec.facilities.end(), q));
    }
}

TEST_CASE("edge selection is uniform (chi-square, alpha 0.001)") {
    const RoadNetwork net = testutil::grid_network(5, 5, 4); // 40 edges
    WorkloadSpec ws;
    ws.seed = 7;
    ws.num_objects = 100000;
    ws.batch_size = 1;
    const Workload w = generate(net, ws);
    std::vector<std::size_t> buckets(net.edge_count(), 0);
    for (const MovingObject& m : w.objects) {
        ++buckets[net.edge_id(m.u, m.v)];
    }
    const double expected =
        static_cast<double>(ws.num_objects) / static_cast<double>(net.edge_count());
    double chi2 = 0.0;
    for (std::size_t b : buckets) {
        const double diff = static_cast<double>(b) - expected;
        chi2 += diff * diff / expected;
    }
    const double dof = static_cast<double>(net.edge_count() - 1);
    CHECK(chi2 < chi_square_critical(dof, 3.0902)); // z for the 0.999 quantile
}

TEST_CASE("length-weighted placement favors long edges") {
    const RoadNetwork net = RoadNetwork::from_parts(
        {{0, 0}, {1, 0}, {10, 0}}, {{0, 1, 1.0}, {1, 2, 9.0}});
    WorkloadSpec ws;
    ws.num_objects = 20000;
    ws.batch_size = 1;
    ws.length_weighted_placement = true;
    const Workload w = generate(net, ws);
    std::size_t on_long = 0;
    for (const MovingObject& m : w.objects) {
        if (m.v == 2) {
            ++on_long;
        }
    }
    const double share = static_cast<double>(on_long) / static_cast<double>(ws.num_objects);
    CHECK(share > 0.85);
    CHECK(share < 0.95); // expected 0.9
}

TEST_CASE("object files round-trip exactly") {
    const RoadNetwork net = testutil::grid_network(6, 6, 5);
    WorkloadSpec ws;
    ws.num_objects = 250;
    ws.batch_size = 4;
    const Workload w = generate(net, ws);

    std::ostringstream out;
    save_objects(out, w.objects);
    std::istringstream in(out.str());
    const auto loaded = load_objects(in, net);
    CHECK(same_objects(w.objects, loaded));

    std::ostringstream q;
    save_queries(q, w.spec.query_facilities, w.spec.k);
    std::istringstream qin(q.str());
    const QueryFile qf = load_queries(qin, net);
    CHECK(qf.queries == w.spec.query_facilities);
    CHECK(qf.k == w.spec.k);

    std::ostringstream f;
    save_facilities(f, w.spec.facilities);
    std::istringstream fin(f.str());
    CHECK(load_facilities(fin, net) == w.spec.facilities);
}

TEST_CASE("hand-written object file") {
    const RoadNetwork net = testutil::path_graph3();
    std::istringstream in("objects 1\no 5 1 2 0.25\n");
    const auto objects = load_objects(in, net);
    REQUIRE(objects.size() == 1);
    CHECK(objects[0].id == 5);
    CHECK(objects[0].u == 0);
    CHECK(objects[0].v == 1);
    CHECK(objects[0].offset == doctest::Approx(0.25));
}

TEST_CASE("object file validation") {
    const RoadNetwork net = testutil::path_graph3();
    const auto reject = [&net](const std::string& text) {
        std::istringstream in(text);
        CHECK_THROWS_AS((void)load_objects(in, net), ParseError);
    };
    reject("objects 1\no 0 1 2 7.5\n");    // offset beyond the edge weight
    reject("objects 1\no 0 2 1 0.5\n");    // non-canonical orientation
    reject("objects 1\no 0 1 3 0.5\n");    // no such edge
    reject("objects 1\no 0 1 9 0.5\n");    // vertex out of range
    reject("objects 2\no 0 1 2 0.5\n");    // count mismatch
    reject("objects 2\no 0 1 2 0.5\no 0 2 3 0.5\n"); // duplicate id
    reject("wrong 1\no 0 1 2 0.5\n");      // bad header
    reject("objects 1\nx 0 1 2 0.5\n");    // bad tag

    std::istringstream queries("queries 1 k=0\nq 1\n");
    CHECK_THROWS_AS((void)load_queries(queries, net), ParseError);
    std::istringstream range("queries 1 k=2\nq 9\n");
    CHECK_THROWS_AS((void)load_queries(range, net), ParseError);
}

TEST_CASE("parse errors carry line numbers") {
    const RoadNetwork net = testutil::path_graph3();
    std::istringstream in("objects 2\no 0 1 2 0.5\no 1 1 2 9.9\n");
    try {
        (void)load_objects(in, net);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 3);
    }
}
