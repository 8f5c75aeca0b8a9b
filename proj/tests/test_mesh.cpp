#include <doctest.h>

#include <cmath>
#include <numbers>

#include "freqstokes/mesh.hpp"
#include "freqstokes/mesh_generate.hpp"
#include "freqstokes/mesh_io.hpp"

using namespace freqstokes;

namespace {

Mesh single_tet() {
    return Mesh(3, {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {0, 1, 2, 3},
                {{"base", {0, 1, 2}}});
}

} // namespace

TEST_CASE("pipe generator: documented node and element counts") {
    const Mesh m = generate_pipe(1.0, 1.0, 2, 4, 2);
    // disc: 1 centre + 4 + 8 ring nodes = 13, times 3 layers
    CHECK(m.num_nodes() == 39);
    // 3 tets per prism, 4*2^2 disc triangles, 2 layers
    CHECK(m.num_elements() == 96);
    CHECK(m.has_patch("inlet"));
    CHECK(m.has_patch("outlet"));
    CHECK(m.has_patch("wall"));
    CHECK(m.num_facets("inlet") == 16);
    CHECK(m.num_facets("outlet") == 16);
    for (int e = 0; e < m.num_elements(); ++e) CHECK(m.element_measure(e) > 0.0);
}

TEST_CASE("pipe generator: M1-scale mesh matches the target size and volume") {
    const Mesh m = generate_pipe_target(1.0, 15.0, 24450);
    CHECK(m.num_elements() > 20000);
    CHECK(m.num_elements() < 30000);
    CHECK(m.num_nodes() > 4000);
    CHECK(m.num_nodes() < 7000);
    const double vol = m.total_measure();
    const double exact = std::numbers::pi * 15.0;
    CHECK(std::abs(vol - exact) / exact < 0.02);
}

TEST_CASE("pipe generator: lateral facets sit on the cylinder surface") {
    const Mesh m = generate_pipe(2.0, 5.0, 3, 6, 4);
    for (int f = 0; f < m.num_facets("wall"); ++f)
        for (int v : m.facet("wall", f)) {
            const Vec3 p = m.node(v);
            CHECK(std::abs(std::hypot(p.x, p.y) - 2.0) < 1e-12 * 2.0);
        }
}

TEST_CASE("pipe generator: closed surface integrates to zero") {
    const Mesh m = generate_pipe(1.0, 3.0, 2, 4, 3);
    Vec3 total;
    double area = 0.0;
    for (const auto& [name, _] : m.patches())
        for (int f = 0; f < m.num_facets(name); ++f) {
            const FacetGeometry g = m.facet_geometry(name, f);
            total += g.normal * g.measure;
            area += g.measure;
        }
    CHECK(norm(total) < 1e-12 * area);
}

TEST_CASE("pipe generator rejects bad arguments") {
    CHECK_THROWS_AS(generate_pipe(0.0, 1.0, 2, 4, 2), MeshError);
    CHECK_THROWS_AS(generate_pipe(1.0, -1.0, 2, 4, 2), MeshError);
    CHECK_THROWS_AS(generate_pipe(1.0, 1.0, 1, 4, 2), MeshError);
    CHECK_THROWS_AS(generate_pipe(1.0, 1.0, 2, 4, 1), MeshError);
    CHECK_THROWS_AS(generate_pipe(1.0, 1.0, 2, 2, 2), MeshError);
}

TEST_CASE("channel generator: counts and patches") {
    SUBCASE("single cell") {
        const Mesh m = generate_channel(1.0, 1.0, 1, 1);
        CHECK(m.num_nodes() == 4);
        CHECK(m.num_elements() == 2);
    }
    SUBCASE("4 x 40 grid") {
        const Mesh m = generate_channel(1.0, 10.0, 4, 40);
        CHECK(m.num_nodes() == 205);
        CHECK(m.num_elements() == 320);
        CHECK(m.num_facets("inlet") == 4);
        CHECK(m.num_facets("outlet") == 4);
        CHECK(m.num_facets("wall") == 80);
        CHECK(m.total_measure() == doctest::Approx(10.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(generate_channel(0.0, 1.0, 1, 1), MeshError);
    CHECK_THROWS_AS(generate_channel(1.0, 1.0, 0, 1), MeshError);
}

TEST_CASE("boundary facet geometry") {
    SUBCASE("unit right tetrahedron, z=0 face") {
        const Mesh m = single_tet();
        const FacetGeometry g = m.facet_geometry("base", 0);
        CHECK(g.measure == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(g.normal.x == doctest::Approx(0.0));
        CHECK(g.normal.y == doctest::Approx(0.0));
        CHECK(g.normal.z == doctest::Approx(-1.0));
    }
    SUBCASE("2D boundary edge of length 2") {
        const Mesh m(2, {{0, 0, 0}, {2, 0, 0}, {0, 2, 0}}, {0, 1, 2}, {{"south", {0, 1}}});
        const FacetGeometry g = m.facet_geometry("south", 0);
        CHECK(g.measure == doctest::Approx(2.0).epsilon(1e-14));
        CHECK(g.normal.y == doctest::Approx(-1.0));
    }
    SUBCASE("outward normals point away from the element") {
        const Mesh m = generate_pipe(1.0, 2.0, 2, 4, 2);
        for (const auto& [name, _] : m.patches())
            for (int f = 0; f < m.num_facets(name); ++f) {
                const FacetGeometry g = m.facet_geometry(name, f);
                Vec3 fc, ec;
                for (int v : m.facet(name, f)) fc += m.node(v);
                fc = fc / 3.0;
                for (int v : m.element(m.facet_element(name, f))) ec += m.node(v);
                ec = ec / 4.0;
                CHECK(dot(g.normal, fc - ec) > 0.0);
            }
    }
}

TEST_CASE("mesh validation errors") {
    SUBCASE("dangling element index names the element") {
        CHECK_THROWS_WITH_AS(
            Mesh(3, {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {0, 1, 2, 4}, {}),
            doctest::Contains("element 0"), MeshError);
    }
    SUBCASE("degenerate element rejected") {
        CHECK_THROWS_WITH_AS(
            Mesh(3, {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}}, {0, 1, 2, 3}, {}),
            doctest::Contains("degenerate"), MeshError);
    }
    SUBCASE("interior face cannot join a patch") {
        CHECK_THROWS_WITH_AS(Mesh(3, {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0, 0, -1}},
                                  {0, 1, 2, 3, 0, 1, 2, 4}, {{"bad", {0, 1, 2}}}),
                             doctest::Contains("interior"), MeshError);
    }
    SUBCASE("facet claimed by two patches") {
        CHECK_THROWS_WITH_AS(
            Mesh(3, {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {0, 1, 2, 3},
                 {{"a", {0, 1, 2}}, {"b", {0, 2, 1}}}),
            doctest::Contains("already belongs"), MeshError);
    }
}

TEST_CASE("neutral format round-trip is exact") {
    SUBCASE("single tetrahedron") {
        const Mesh m = single_tet();
        const std::string once = mesh_to_json_string(m);
        const Mesh back = mesh_from_json_string(once);
        CHECK(mesh_to_json_string(back) == once);
        CHECK(back.num_nodes() == m.num_nodes());
    }
    SUBCASE("generated channel with irrational coordinates") {
        const Mesh m = generate_channel(std::numbers::pi / 7.0, std::sqrt(2.0), 3, 5);
        const std::string once = mesh_to_json_string(m);
        const Mesh back = mesh_from_json_string(once);
        REQUIRE(back.num_nodes() == m.num_nodes());
        for (int i = 0; i < m.num_nodes(); ++i) {
            CHECK(back.node(i).x == m.node(i).x); // bit-exact
            CHECK(back.node(i).y == m.node(i).y);
        }
        CHECK(back.element_nodes() == m.element_nodes());
        CHECK(back.patches() == m.patches());
        CHECK(mesh_to_json_string(back) == once);
    }
    SUBCASE("generated pipe") {
        const Mesh m = generate_pipe(1.0, 2.0, 2, 4, 2);
        CHECK(mesh_to_json_string(mesh_from_json_string(mesh_to_json_string(m))) ==
              mesh_to_json_string(m));
    }
}

TEST_CASE("neutral format schema errors carry location") {
    SUBCASE("element referencing node index == node count") {
        const char* text = R"({"dimension":3,
            "nodes":[[0,0,0],[1,0,0],[0,1,0],[0,0,1]],
            "elements":[[0,1,2,4]],
            "patches":{}})";
        CHECK_THROWS_WITH_AS(mesh_from_json_string(text), doctest::Contains("element 0"),
                             MeshError);
    }
    SUBCASE("duplicate patch name") {
        const char* text = R"({"dimension":3,
            "nodes":[[0,0,0],[1,0,0],[0,1,0],[0,0,1]],
            "elements":[[0,1,2,3]],
            "patches":{"a":[[0,1,2]],"a":[[0,2,1]]}})";
        CHECK_THROWS_WITH_AS(mesh_from_json_string(text), doctest::Contains("duplicate"),
                             MeshError);
    }
    SUBCASE("missing field") {
        CHECK_THROWS_WITH_AS(mesh_from_json_string(R"({"dimension":3})"),
                             doctest::Contains("missing field"), MeshError);
    }
    SUBCASE("wrong node arity") {
        const char* text = R"({"dimension":3,"nodes":[[0,0]],"elements":[],"patches":{}})";
        CHECK_THROWS_WITH_AS(mesh_from_json_string(text), doctest::Contains("nodes[0]"), MeshError);
    }
}
