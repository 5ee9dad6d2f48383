#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "support.hpp"

using namespace trajloc;
using testsupport::make_map;
using testsupport::make_random_graph;

namespace {

const char* kMinimalOsm = R"(<?xml version="1.0" encoding="UTF-8"?>
<osm version="0.6">
  <node id="1" lat="40.0" lon="-83.0"/>
  <node id="2" lat="40.001" lon="-83.0"/>
  <way id="100">
    <nd ref="1"/>
    <nd ref="2"/>
  </way>
</osm>
)";

}  // namespace

TEST_CASE("parse_osm: minimal two-node way") {
    MapGraph g = parse_osm(kMinimalOsm);
    CHECK(g.node_count() == 2);
    CHECK(g.edge_count() == 1);
    CHECK(g.edges()[0].id == 0);
}

TEST_CASE("parse_osm: multi-node way splits into per-segment edges") {
    std::string osm = R"(<osm>
      <node id="1" lat="40.0" lon="-83.0"/>
      <node id="2" lat="40.001" lon="-83.0"/>
      <node id="3" lat="40.002" lon="-83.0"/>
      <way id="7"><nd ref="1"/><nd ref="2"/><nd ref="3"/></way>
    </osm>)";
    MapGraph g = parse_osm(osm);
    CHECK(g.edge_count() == 2);
}

TEST_CASE("parse_osm: duplicate node pairs across ways deduplicated") {
    // triangle where one side appears in two ways -> 3 edges, not 4
    std::string osm = R"(<osm>
      <node id="1" lat="40.0" lon="-83.0"/>
      <node id="2" lat="40.001" lon="-83.0"/>
      <node id="3" lat="40.0" lon="-82.999"/>
      <way id="1"><nd ref="1"/><nd ref="2"/><nd ref="3"/></way>
      <way id="2"><nd ref="3"/><nd ref="1"/><nd ref="2"/></way>
    </osm>)";
    MapGraph g = parse_osm(osm);
    // oracle: distinct unordered endpoint pairs
    std::set<std::pair<NodeId, NodeId>> pairs;
    for (const auto& e : g.edges()) pairs.insert({e.a, e.b});
    CHECK(pairs.size() == 3);
    CHECK(g.edge_count() == 3);
}

TEST_CASE("parse_osm: relations are ignored") {
    std::string osm = R"(<osm>
      <node id="1" lat="40.0" lon="-83.0"/>
      <node id="2" lat="40.001" lon="-83.0"/>
      <way id="1"><nd ref="1"/><nd ref="2"/></way>
      <relation id="9"><member type="way" ref="1" role="outer"/></relation>
    </osm>)";
    CHECK(parse_osm(osm).edge_count() == 1);
}

TEST_CASE("parse_osm: errors") {
    SUBCASE("way referencing missing node names the ref") {
        std::string osm = R"(<osm>
          <node id="1" lat="40.0" lon="-83.0"/>
          <way id="1"><nd ref="1"/><nd ref="99"/></way>
        </osm>)";
        CHECK_THROWS_WITH_AS(parse_osm(osm), doctest::Contains("99"), DataError);
    }
    SUBCASE("malformed XML reports a line number") {
        std::string osm = "<osm>\n<node id=\"1\" lat=\"40\" lon\n</osm>";
        CHECK_THROWS_WITH_AS(parse_osm(osm), doctest::Contains("line"), DataError);
    }
    SUBCASE("empty result") {
        CHECK_THROWS_AS(parse_osm("<osm></osm>"), DataError);
    }
}

TEST_CASE("parse_osm is deterministic over repeated parses") {
    std::string osm = R"(<osm>
      <node id="5" lat="40.0" lon="-83.0"/>
      <node id="3" lat="40.001" lon="-83.0"/>
      <node id="9" lat="40.0" lon="-82.999"/>
      <way id="1"><nd ref="9"/><nd ref="5"/><nd ref="3"/></way>
    </osm>)";
    MapGraph g1 = parse_osm(osm);
    MapGraph g2 = parse_osm(osm);
    REQUIRE(g1.edge_count() == g2.edge_count());
    for (std::size_t i = 0; i < g1.edge_count(); ++i) {
        CHECK(g1.edges()[i].a == g2.edges()[i].a);
        CHECK(g1.edges()[i].b == g2.edges()[i].b);
    }
    // canonical ordering: sorted endpoint pairs
    for (std::size_t i = 1; i < g1.edges().size(); ++i) {
        auto prev = std::make_pair(g1.edges()[i - 1].a, g1.edges()[i - 1].b);
        auto cur = std::make_pair(g1.edges()[i].a, g1.edges()[i].b);
        CHECK(prev < cur);
    }
}

TEST_CASE("parse_simple_graph: path and cycle fixtures") {
    MapGraph path = testsupport::make_path_graph(3);
    CHECK(path.node_count() == 3);
    CHECK(path.edge_count() == 2);

    MapGraph cyc = testsupport::make_cycle_graph(4);
    CHECK(cyc.edge_count() == 4);
    for (const auto& n : cyc.nodes()) CHECK(cyc.neighbors(n.id).size() == 2);
}

TEST_CASE("parse_simple_graph: errors") {
    CHECK_THROWS_AS(parse_simple_graph("node 1 40 -83\nedge 1 2\n"), DataError);
    CHECK_THROWS_AS(parse_simple_graph("node 1 40 -83\nnode 1 41 -83\nedge 1 1\n"),
                    DataError);
    CHECK_THROWS_AS(parse_simple_graph("bogus 1 2 3\n"), DataError);
}

TEST_CASE("parse_simple_graph: line counts survive set-based dedup") {
    std::mt19937_64 rng(7);
    std::ostringstream text;
    std::set<std::pair<NodeId, NodeId>> unique_pairs;
    int n = 20;
    for (int i = 1; i <= n; ++i)
        text << "node " << i << " " << 40.0 + i * 1e-4 << " " << -83.0 + (i % 5) * 1e-4
             << "\n";
    // chain to keep it connected, then random extras with duplicates
    for (int i = 1; i < n; ++i) {
        text << "edge " << i << " " << i + 1 << "\n";
        unique_pairs.insert({i, i + 1});
    }
    for (int i = 0; i < 30; ++i) {
        NodeId a = static_cast<NodeId>(rng() % n) + 1;
        NodeId b = static_cast<NodeId>(rng() % n) + 1;
        text << "edge " << a << " " << b << "\n";
        if (a != b) unique_pairs.insert({std::min(a, b), std::max(a, b)});
    }
    MapGraph g = parse_simple_graph(text.str());
    CHECK(g.node_count() == static_cast<std::size_t>(n));
    CHECK(g.edge_count() == unique_pairs.size());
}

TEST_CASE("only the largest connected component is retained") {
    MapGraph g = make_map({{1, 0, 0}, {2, 100, 0}, {3, 200, 0}, {10, 5000, 0}, {11, 5100, 0}},
                          {{1, 2}, {2, 3}, {10, 11}});
    CHECK(g.node_count() == 3);
    CHECK(g.edge_count() == 2);
    CHECK_FALSE(g.has_node(10));
}

TEST_CASE("edges_adjacent") {
    MapGraph path = testsupport::make_path_graph(3);
    CHECK(path.edges_adjacent(0, 1));
    CHECK(path.edges_adjacent(0, 0));

    MapGraph cyc = testsupport::make_cycle_graph(4);
    // opposite edges of a 4-cycle share no node
    for (EdgeId a = 0; a < 4; ++a)
        for (EdgeId b = 0; b < 4; ++b) {
            const Edge& ea = cyc.edge(a);
            const Edge& eb = cyc.edge(b);
            bool share = ea.a == eb.a || ea.a == eb.b || ea.b == eb.a || ea.b == eb.b;
            CHECK(cyc.edges_adjacent(a, b) == share);
        }
    CHECK_THROWS_AS(path.edges_adjacent(0, 99), DataError);
}

TEST_CASE("edges_adjacent matches brute force and is symmetric on random graphs") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        MapGraph g = make_random_graph(seed, 12, 10);
        for (EdgeId a = 0; a < static_cast<EdgeId>(g.edge_count()); ++a)
            for (EdgeId b = 0; b < static_cast<EdgeId>(g.edge_count()); ++b) {
                const Edge& ea = g.edge(a);
                const Edge& eb = g.edge(b);
                std::set<NodeId> sa{ea.a, ea.b}, sb{eb.a, eb.b};
                std::vector<NodeId> inter;
                std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(),
                                      std::back_inserter(inter));
                CHECK(g.edges_adjacent(a, b) == !inter.empty());
                CHECK(g.edges_adjacent(a, b) == g.edges_adjacent(b, a));
            }
    }
}

TEST_CASE("adjacency lists every incident edge") {
    MapGraph g = make_random_graph(11, 15, 12);
    for (const auto& e : g.edges()) {
        for (NodeId n : {e.a, e.b}) {
            bool found = false;
            for (const auto& [_, eid] : g.neighbors(n))
                if (eid == e.id) found = true;
            CHECK(found);
        }
    }
}

TEST_CASE("project_local") {
    MapGraph g = parse_simple_graph(
        "node 1 40.0 -83.0\nnode 2 40.002 -83.0\nnode 3 40.001 -83.0\nedge 1 3\nedge 2 3\n");
    SUBCASE("centroid node projects to origin") {
        auto [x, y] = g.project_local(3);  // node 3 sits at the centroid
        CHECK(x == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(y == doctest::Approx(0.0).epsilon(1e-9));
    }
    SUBCASE("0.001 degree of latitude is about 111.19 m") {
        auto [x, y] = g.project_local(2);
        CHECK(x == doctest::Approx(0.0));
        CHECK(y == doctest::Approx(6371000.0 * 0.001 * std::numbers::pi / 180.0).epsilon(1e-9));
    }
    SUBCASE("pairwise distances symmetric") {
        auto [x1, y1] = g.project_local(1);
        auto [x2, y2] = g.project_local(2);
        CHECK(std::hypot(x2 - x1, y2 - y1) == doctest::Approx(std::hypot(x1 - x2, y1 - y2)));
    }
    CHECK_THROWS_AS(g.project_local(42), DataError);
}

TEST_CASE("project_local within 1% of haversine for sub-10km graphs") {
    MapGraph g = make_random_graph(21, 25, 15, 8000.0);
    const auto& nodes = g.nodes();
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t j = i + 1; j < nodes.size(); ++j) {
            auto [xi, yi] = g.project_local(nodes[i].id);
            auto [xj, yj] = g.project_local(nodes[j].id);
            double planar = std::hypot(xj - xi, yj - yi);
            double hav = haversine_m(nodes[i].lat, nodes[i].lon, nodes[j].lat, nodes[j].lon);
            if (hav > 1.0) CHECK(std::abs(planar - hav) / hav < 0.01);
        }
}

TEST_CASE("node validation") {
    CHECK_THROWS_AS(make_map({{1, 0, 0}}, {}), DataError);  // no edges
    CHECK_THROWS_AS(parse_simple_graph("node 1 95 0\nnode 2 40 0\nedge 1 2\n"), DataError);
    CHECK_THROWS_AS(parse_simple_graph("node 1 40 190\nnode 2 40 0\nedge 1 2\n"), DataError);
}

TEST_CASE("summary and geojson export") {
    MapGraph g = testsupport::make_path_graph(3);
    std::string s = g.summary();
    CHECK(s.find("nodes\t3") != std::string::npos);
    CHECK(s.find("edges\t2") != std::string::npos);
    std::string gj = g.to_geojson();
    CHECK(gj.find("FeatureCollection") != std::string::npos);
    CHECK(gj.find("LineString") != std::string::npos);
}
