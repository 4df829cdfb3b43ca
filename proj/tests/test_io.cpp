#include <doctest.h>

#include <sstream>

#include "hypent/fixtures.hpp"
#include "hypent/io.hpp"

using namespace hypent;

TEST_CASE("cloud CSV round trip") {
    const auto c = fixtures::cantor_product_cloud(3);
    std::stringstream ss;
    io::write_cloud_csv(ss, c);
    const auto back = io::read_cloud_csv(ss);
    CHECK(back.n == 2);
    CHECK(back.points == c.points);
}

TEST_CASE("cloud CSV errors carry the line") {
    std::istringstream bad("x\n0.5\n# note\n0.25\nabc\n");
    try {
        io::read_cloud_csv(bad);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line == 5);
    }
    std::istringstream ragged("0,1\n2\n");
    CHECK_THROWS_AS(io::read_cloud_csv(ragged), ParseError);
    std::istringstream empty("x\n");
    CHECK_THROWS_AS(io::read_cloud_csv(empty), ParseError);
}

TEST_CASE("set CSV round trip keeps the base point first") {
    auto u = build_dyadic_uds(fixtures::cantor_cloud(4), 0, 6);
    std::stringstream ss;
    io::write_uds_csv(ss, u);
    const auto back = io::read_uds_csv(ss, 1);
    CHECK(back.origin_index == 0);
    CHECK(back.points.size() == u.points.size());
    CHECK(back.points[0].height == u.origin().height);
    CHECK(back.points[0].base == u.origin().base);
    std::istringstream neg("x,t\n0,1\n0,-1\n");
    CHECK_THROWS_AS(io::read_uds_csv(neg, 1), ParseError);
}

TEST_CASE("group JSON") {
    std::istringstream good(R"({"n": 1, "pairs": [{"center": -2, "radius": 1, "center2": [2, 0], "radius2": 1}]})");
    const auto s = io::read_group_json(good);
    CHECK(s.pairs.size() == 1);
    CHECK(s.pairs[0].center2 == Complex(2, 0));
    std::istringstream overlap(R"({"n": 1, "pairs": [{"center": 0, "radius": 1, "center2": 1, "radius2": 1}]})");
    CHECK_THROWS_AS(io::read_group_json(overlap), InvalidSpecError);
    std::istringstream missing(R"({"n": 1, "pairs": [{"center": 0}]})");
    CHECK_THROWS_AS(io::read_group_json(missing), InvalidSpecError);
    std::istringstream broken("{");
    CHECK_THROWS_AS(io::read_group_json(broken), ParseError);
}

TEST_CASE("graph edge list") {
    std::istringstream g("# three pants in a row\n0 1\n1 2\nfunnel 0\nfunnel 0\nfunnel 2\n");
    const auto pg = io::read_graph(g, 2.0);
    CHECK(pg.vertex_count() == 3);
    CHECK(pg.funnels(0) == 2);
    CHECK(boundary_edge_count(pg, {0, 1, 2}) == 3);
    std::istringstream bad("0 1\n1 x\n");
    try {
        io::read_graph(bad, 1.0);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
    }
    std::istringstream three("0 1 2\n");
    CHECK_THROWS_AS(io::read_graph(three, 1.0), ParseError);
}

TEST_CASE("doubles print in shortest round-trip form") {
    CHECK(io::format_double(0.1) == "0.1");
    CHECK(io::format_double(1.0 / 3) == "0.3333333333333333");
}
