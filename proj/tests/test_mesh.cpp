#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "specsurf/mesh.hpp"
#include "specsurf/primitives.hpp"

using namespace specsurf;

namespace {

constexpr double kPi = std::numbers::pi;

bool has_kind(const std::vector<Violation>& vs, Violation::Kind k) {
  for (const auto& v : vs)
    if (v.kind == k) return true;
  return false;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string tmp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("icosahedron combinatorics") {
  const auto mesh = icosphere(0);
  CHECK(mesh.vertex_count() == 12);
  CHECK(mesh.face_count() == 20);
  CHECK(euler_char(mesh) == 2);
  CHECK(validate(mesh).empty());
  CHECK(orientability(mesh) == Orientability::Orientable);
}

TEST_CASE("icosphere refinement: area approaches the round sphere") {
  const auto mesh = icosphere(5);
  CHECK(euler_char(mesh) == 2);
  const double a = area(mesh);
  CHECK(std::abs(a - 4.0 * kPi) / (4.0 * kPi) < 0.005);
}

TEST_CASE("icosphere flat cap is exactly flat and validates") {
  const auto mesh = icosphere(3, 0.4);
  REQUIRE(mesh.flat_patches().size() == 1);
  CHECK(mesh.flat_patches()[0].center == 0);
  CHECK(mesh.flat_patches()[0].radius == doctest::Approx(0.4));
  CHECK(validate(mesh).empty());
}

TEST_CASE("moebius band: one boundary loop, chi = 0, nonorientable") {
  const auto mesh = moebius_band(1.0, 16, 8);
  CHECK(mesh.boundary_loops().size() == 1);
  CHECK(euler_char(mesh) == 0);
  CHECK(validate(mesh).empty());
  CHECK(orientability(mesh) == Orientability::Nonorientable);
  CHECK(moebius_band(1.0, 16).boundary_loops().size() == 1);
  CHECK_THROWS_AS(moebius_band(1.0, 15), ValidationError);
  CHECK_THROWS_AS(moebius_band(1.0, 6), ValidationError);
}

TEST_CASE("cylinder: two loops, chi = 0, orientable, exact area") {
  const auto mesh = cylinder_band(1.0, 16);
  CHECK(mesh.boundary_loops().size() == 2);
  CHECK(euler_char(mesh) == 0);
  CHECK(validate(mesh).empty());
  CHECK(orientability(mesh) == Orientability::Orientable);
  CHECK(area(mesh) == doctest::Approx(4.0 * kPi).epsilon(1e-12));
}

TEST_CASE("moebius area is half the doubled cylinder") {
  const auto mesh = moebius_band(1.0, 16);
  CHECK(area(mesh) == doctest::Approx(2.0 * kPi).epsilon(1e-12));
}

TEST_CASE("flat torus: chi = 0, orientable, exact unit area") {
  const auto mesh = flat_torus(8, 8);
  CHECK(euler_char(mesh) == 0);
  CHECK(orientability(mesh) == Orientability::Orientable);
  CHECK(validate(mesh).empty());
  CHECK(area(mesh) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("equilateral flat torus: exact lattice area") {
  const Eigen::Vector2d u(1.0, 0.0), w(0.5, std::sqrt(3.0) / 2.0);
  const auto mesh = flat_torus(8, 8, u, w);
  CHECK(validate(mesh).empty());
  CHECK(area(mesh) == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-12));
}

TEST_CASE("flat disk: one loop, chi = 1, exact polygon area") {
  const auto mesh = flat_disk(1.0, 32);
  CHECK(mesh.boundary_loops().size() == 1);
  CHECK(euler_char(mesh) == 1);
  CHECK(validate(mesh).empty());
  const double ngon = 0.5 * 32 * std::sin(2.0 * kPi / 32);
  CHECK(area(mesh) == doctest::Approx(ngon).epsilon(1e-12));
}

TEST_CASE("density-weighted area: trivial scalings") {
  const auto mesh = flat_torus(6, 6);
  const auto one = DensityField::uniform(mesh.vertex_count());
  CHECK(area(mesh, one) == doctest::Approx(area(mesh)).epsilon(1e-14));
  auto two = one;
  two.values *= 2.0;
  CHECK(area(mesh, two) == doctest::Approx(2.0 * area(mesh)).epsilon(1e-14));
}

TEST_CASE("validate reports a broken triangle inequality") {
  MeshData data;
  data.vertex_count = 3;
  data.faces = {{0, 1, 2}};
  data.edge_lengths = {{{0, 1}, 1.0}, {{1, 2}, 1.0}, {{0, 2}, 2.0}};
  BoundaryLoop loop;
  loop.vertices = {0, 1, 2};
  loop.angles.resize(3);
  loop.angles << 0.0, 2.0, 4.0;
  data.boundary_loops.push_back(loop);
  const IntrinsicMesh mesh(std::move(data));
  CHECK(has_kind(validate(mesh), Violation::Kind::TriangleInequality));
}

TEST_CASE("validate reports an edge shared by three faces") {
  MeshData data;
  data.vertex_count = 5;
  data.faces = {{0, 1, 2}, {0, 1, 3}, {0, 1, 4}};
  data.edge_lengths = {{{0, 1}, 1.0}, {{0, 2}, 1.0}, {{1, 2}, 1.0}, {{0, 3}, 1.0},
                       {{1, 3}, 1.0}, {{0, 4}, 1.0}, {{1, 4}, 1.0}};
  const IntrinsicMesh mesh(std::move(data));
  CHECK(has_kind(validate(mesh), Violation::Kind::NonManifoldEdge));
}

TEST_CASE("validate flags a falsely declared flat patch") {
  // Cone of 5 equilateral triangles: interior angle sum 5*pi/3 != 2*pi.
  MeshData data;
  data.vertex_count = 6;
  for (int j = 0; j < 5; ++j) data.faces.push_back({0, 1 + j, 1 + (j + 1) % 5});
  for (int j = 0; j < 5; ++j) {
    data.edge_lengths.push_back({{0, 1 + j}, 1.0});
    data.edge_lengths.push_back({{1 + j, 1 + (j + 1) % 5}, 1.0});
  }
  BoundaryLoop loop;
  loop.vertices = {1, 2, 3, 4, 5};
  loop.angles.resize(5);
  for (int j = 0; j < 5; ++j) loop.angles[j] = 2.0 * kPi * j / 5;
  data.boundary_loops.push_back(loop);
  data.flat_patches.push_back({0, std::numeric_limits<double>::infinity()});
  const IntrinsicMesh mesh(std::move(data));
  CHECK(has_kind(validate(mesh), Violation::Kind::FlatPatchAngle));
}

TEST_CASE("save/load round-trips bit-exactly and deterministically") {
  const auto mesh = icosphere(2, 0.3);
  const auto p1 = tmp_path("specsurf_mesh_a.imesh");
  const auto p2 = tmp_path("specsurf_mesh_b.imesh");
  save(mesh, p1, {"round-trip fixture"});
  const auto back = load(p1);
  save(back, p2, {"round-trip fixture"});

  CHECK(back.vertex_count() == mesh.vertex_count());
  CHECK(back.face_count() == mesh.face_count());
  CHECK(back.edge_count() == mesh.edge_count());
  CHECK((back.faces() - mesh.faces()).cwiseAbs().maxCoeff() == 0);
  for (int e = 0; e < mesh.edge_count(); ++e)
    CHECK(back.edge_lengths()[e] == mesh.edge_lengths()[e]);
  REQUIRE(back.flat_patches().size() == mesh.flat_patches().size());
  CHECK(back.flat_patches()[0].center == mesh.flat_patches()[0].center);
  CHECK(back.flat_patches()[0].radius == mesh.flat_patches()[0].radius);
  CHECK(back.orientable_hint() == mesh.orientable_hint());

  CHECK(read_file(p1) == read_file(p2));
  std::filesystem::remove(p1);
  std::filesystem::remove(p2);
}

TEST_CASE("loader rejects malformed files with diagnostics") {
  const auto path = tmp_path("specsurf_mesh_bad.imesh");
  {
    std::ofstream out(path);
    out << "IMESH v1 3 1 0\nf 0 1 2\ne 0 1 -2.0\ne 1 2 1.0\ne 0 2 1.0\n";
  }
  CHECK_THROWS_AS(load(path), ValidationError);
  {
    std::ofstream out(path);
    out << "IMESH v1 3 1 0\nf 0 1 7\ne 0 1 1.0\ne 1 2 1.0\ne 0 2 1.0\n";
  }
  CHECK_THROWS_AS(load(path), ValidationError);
  {
    std::ofstream out(path);
    out << "IMESH v2 3 1 0\n";
  }
  CHECK_THROWS_AS(load(path), ValidationError);
  std::filesystem::remove(path);
}

TEST_CASE("build_primitive dispatch") {
  const auto sphere = build_primitive("icosphere", {{"subdiv", 1}});
  CHECK(euler_char(sphere) == 2);
  const auto torus = build_primitive("flat_torus", {{"nx", 4}, {"ny", 4}});
  CHECK(euler_char(torus) == 0);
  CHECK_THROWS_AS(build_primitive("dodecahedron", {}), ValidationError);
}
