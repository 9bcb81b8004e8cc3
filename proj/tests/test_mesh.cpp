#include "catch_amalgamated.hpp"

#include "evodd/error.hpp"
#include "evodd/mesh.hpp"

#include <random>

using namespace evodd;

TEST_CASE("1D mesh split at the midpoint", "[mesh]") {
  const auto mesh = build_decomposed_mesh(1, 4, 0.5);
  const auto& w = mesh.whole();
  REQUIRE(w.num_nodes() == 5);
  for (int a = 0; a < 5; ++a) CHECK(w.nodes[a][0] == Catch::Approx(0.25 * a));
  REQUIRE(w.interface_nodes.size() == 1);
  CHECK(w.nodes[w.interface_nodes[0]][0] == 0.5);

  const auto interior1 = mesh.sub(1).nodes_with_role(NodeRole::interior);
  const auto interior2 = mesh.sub(2).nodes_with_role(NodeRole::interior);
  REQUIRE(interior1.size() == 1);
  REQUIRE(interior2.size() == 1);
  CHECK(mesh.sub(1).nodes[interior1[0]][0] == 0.25);
  CHECK(mesh.sub(2).nodes[interior2[0]][0] == 0.75);
}

TEST_CASE("split must fall on a grid line", "[mesh][errors]") {
  try {
    build_decomposed_mesh(1, 4, 0.3);
    FAIL("expected configuration error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::configuration);
  }
  CHECK_THROWS_AS(build_decomposed_mesh(2, 2, 0.5), Error);
  CHECK_THROWS_AS(build_decomposed_mesh(3, 8, 0.5), Error);
}

TEST_CASE("2D interface has clamped endpoints", "[mesh]") {
  const auto mesh = build_decomposed_mesh(2, 4, 0.5);
  const auto& w = mesh.whole();
  CHECK(w.interface_all.size() == 5);
  CHECK(w.interface_nodes.size() == 3);
  int clamped = 0;
  for (int a : w.interface_all) clamped += w.roles[a] == NodeRole::boundary ? 1 : 0;
  CHECK(clamped == 2);
  // free Gamma nodes ordered along the interface
  for (size_t k = 1; k < w.interface_nodes.size(); ++k) {
    CHECK(w.nodes[w.interface_nodes[k]][1] > w.nodes[w.interface_nodes[k - 1]][1]);
  }
}

TEST_CASE("subdomain cells partition the whole mesh", "[mesh][property]") {
  for (int dim : {1, 2}) {
    const auto mesh = build_decomposed_mesh(dim, 8, 0.25);
    CHECK(mesh.sub(1).num_cells() + mesh.sub(2).num_cells() == mesh.whole().num_cells());
    // every subdomain node maps onto a global node at the same coordinates
    for (int i : {1, 2}) {
      const auto& s = mesh.sub(i);
      for (int a = 0; a < s.num_nodes(); ++a) {
        CHECK((s.nodes[a] - mesh.whole().nodes[s.to_global[a]]).norm() == 0.0);
      }
    }
  }
}

TEST_CASE("restrict and glue round trip", "[mesh][oracle]") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int dim : {1, 2}) {
    const auto mesh = build_decomposed_mesh(dim, 8, 0.5);
    SpaceTimeField f(MeshTag::whole, 4, mesh.whole().num_nodes());
    for (int m = 1; m < 4; ++m) {
      for (int a = 0; a < f.nodes(); ++a) {
        f.values(m, a) = mesh.whole().roles[a] == NodeRole::boundary ? 0.0 : u(rng);
      }
    }
    const auto glued = glue(mesh, restrict_field(mesh, f, 1), restrict_field(mesh, f, 2));
    CHECK(glued.values == f.values);
    // trace commutes with restriction
    CHECK(trace_of(mesh, restrict_field(mesh, f, 1)).values == trace_of(mesh, f).values);
    CHECK(trace_of(mesh, restrict_field(mesh, f, 2)).values == trace_of(mesh, f).values);
  }
}

TEST_CASE("restriction of trivial fields", "[mesh]") {
  const auto mesh = build_decomposed_mesh(2, 4, 0.5);
  SpaceTimeField zero(MeshTag::whole, 3, mesh.whole().num_nodes());
  CHECK(restrict_field(mesh, zero, 2).values.isZero());
  CHECK(trace_of(mesh, zero).values.isZero());

  SpaceTimeField ones = zero;
  for (int a = 0; a < ones.nodes(); ++a) {
    if (mesh.whole().roles[a] != NodeRole::boundary) ones.values.col(a).setOnes();
  }
  const auto r1 = restrict_field(mesh, ones, 1);
  for (int a = 0; a < r1.nodes(); ++a) {
    if (mesh.sub(1).roles[a] != NodeRole::boundary) CHECK(r1.values(2, a) == 1.0);
  }
  CHECK((trace_of(mesh, ones).values.array() == 1.0).all());
}

TEST_CASE("glue rejects mismatched traces", "[mesh][errors]") {
  const auto mesh = build_decomposed_mesh(1, 8, 0.5);
  SpaceTimeField u1(MeshTag::sub1, 3, mesh.sub(1).num_nodes());
  SpaceTimeField u2(MeshTag::sub2, 3, mesh.sub(2).num_nodes());
  CHECK(glue(mesh, u1, u2).values.isZero());
  u1.values(2, mesh.sub(1).interface_nodes[0]) = 1.0;
  try {
    glue(mesh, u1, u2);
    FAIL("expected transmission violation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::transmission_violation);
    CHECK(std::string(e.what()).find("level 2") != std::string::npos);
  }
  CHECK_THROWS_AS(restrict_field(mesh, u1, 1), Error);
}
