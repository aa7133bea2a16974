#include "specsurf/primitives.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <unordered_map>

namespace specsurf {

namespace {

constexpr double kPi = std::numbers::pi;

void add_edge(MeshData& data, int i, int j, double len) {
  data.edge_lengths.push_back({{i, j}, len});
}

}  // namespace

IntrinsicMesh icosphere(int subdiv, double flat_cap_radius) {
  if (subdiv < 0) throw ValidationError("icosphere: subdivision must be >= 0");
  if (flat_cap_radius < 0.0 || flat_cap_radius > 1.2)
    throw ValidationError("icosphere: flat cap radius must lie in [0, 1.2]");

  // Icosahedron with a vertex at each pole.
  std::vector<Eigen::Vector3d> pts;
  pts.emplace_back(0.0, 0.0, 1.0);
  const double z = 1.0 / std::sqrt(5.0);
  const double r = 2.0 / std::sqrt(5.0);
  for (int j = 0; j < 5; ++j) {
    const double phi = 2.0 * kPi * j / 5.0;
    pts.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
  }
  for (int j = 0; j < 5; ++j) {
    const double phi = 2.0 * kPi * j / 5.0 + kPi / 5.0;
    pts.emplace_back(r * std::cos(phi), r * std::sin(phi), -z);
  }
  pts.emplace_back(0.0, 0.0, -1.0);

  std::vector<std::array<int, 3>> faces;
  for (int j = 0; j < 5; ++j) {
    const int a = 1 + j, b = 1 + (j + 1) % 5;
    const int c = 6 + j, d = 6 + (j + 1) % 5;
    faces.push_back({0, a, b});
    faces.push_back({a, c, b});
    faces.push_back({b, c, d});
    faces.push_back({11, d, c});
  }

  for (int level = 0; level < subdiv; ++level) {
    std::unordered_map<std::int64_t, int> midpoint;
    auto mid = [&](int i, int j) {
      const std::int64_t key =
          (static_cast<std::int64_t>(std::min(i, j)) << 32) | std::max(i, j);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      Eigen::Vector3d m = (pts[i] + pts[j]).normalized();
      pts.push_back(m);
      const int id = static_cast<int>(pts.size()) - 1;
      midpoint.emplace(key, id);
      return id;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(faces.size() * 4);
    for (const auto& f : faces) {
      const int ab = mid(f[0], f[1]);
      const int bc = mid(f[1], f[2]);
      const int ca = mid(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    faces = std::move(next);
  }

  const int nv = static_cast<int>(pts.size());

  // Geodesic-polar development of the cap about the north pole (vertex 0).
  std::vector<char> in_cap(nv, 0);
  std::vector<Eigen::Vector2d> cap_xy(nv, Eigen::Vector2d::Zero());
  double develop_radius = 0.0;
  if (flat_cap_radius > 0.0) {
    const double icosa_arc = std::acos(1.0 / std::sqrt(5.0));
    const double h_est = icosa_arc / std::pow(2.0, subdiv);
    develop_radius = flat_cap_radius + std::max(3.0 * h_est, 0.3 * flat_cap_radius);
    if (develop_radius > 1.45)
      throw ValidationError(
          "icosphere: resolution too coarse for the requested flat cap");
    for (int v = 0; v < nv; ++v) {
      const double rho = std::hypot(pts[v].x(), pts[v].y());
      const double arc = std::atan2(rho, pts[v].z());
      if (arc <= develop_radius) {
        in_cap[v] = 1;
        if (rho > 0.0) cap_xy[v] = arc / rho * Eigen::Vector2d(pts[v].x(), pts[v].y());
      }
    }
  }

  MeshData data;
  data.vertex_count = nv;
  data.faces = faces;
  std::unordered_map<std::int64_t, char> seen;
  for (const auto& f : faces) {
    for (int c = 0; c < 3; ++c) {
      const int i = f[c];
      const int j = f[(c + 1) % 3];
      const std::int64_t key =
          (static_cast<std::int64_t>(std::min(i, j)) << 32) | std::max(i, j);
      if (!seen.emplace(key, 1).second) continue;
      double len;
      if (in_cap[i] && in_cap[j])
        len = (cap_xy[i] - cap_xy[j]).norm();
      else
        len = (pts[i] - pts[j]).norm();
      add_edge(data, i, j, len);
    }
  }
  if (flat_cap_radius > 0.0) data.flat_patches.push_back({0, flat_cap_radius});
  data.orientable = Orientability::Orientable;
  return IntrinsicMesh(std::move(data));
}

IntrinsicMesh flat_torus(int nx, int ny, const Eigen::Vector2d& u,
                         const Eigen::Vector2d& w) {
  if (nx < 3 || ny < 3) throw ValidationError("flat_torus: grid must be at least 3x3");
  const double det = u.x() * w.y() - u.y() * w.x();
  if (std::abs(det) < 1e-14)
    throw ValidationError("flat_torus: degenerate lattice basis");

  const Eigen::Vector2d du = u / nx;
  const Eigen::Vector2d dw = w / ny;
  auto vid = [nx, ny](int i, int j) {
    return ((i % nx + nx) % nx) * ny + ((j % ny + ny) % ny);
  };
  auto pos = [&](int i, int j) -> Eigen::Vector2d { return i * du + j * dw; };

  MeshData data;
  data.vertex_count = nx * ny;

  // Split each cell along its shorter diagonal (one global choice).
  const bool main_diag = (du + dw).norm() <= (dw - du).norm();
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      const int a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
      if (main_diag) {
        data.faces.push_back({a, b, c});
        data.faces.push_back({a, c, d});
      } else {
        data.faces.push_back({a, b, d});
        data.faces.push_back({b, c, d});
      }
    }
  }

  const double len_u = du.norm();
  const double len_w = dw.norm();
  const double len_diag = main_diag ? (du + dw).norm() : (dw - du).norm();
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      add_edge(data, vid(i, j), vid(i + 1, j), len_u);
      add_edge(data, vid(i, j), vid(i, j + 1), len_w);
      if (main_diag)
        add_edge(data, vid(i, j), vid(i + 1, j + 1), len_diag);
      else
        add_edge(data, vid(i + 1, j), vid(i, j + 1), len_diag);
    }
  }
  (void)pos;

  data.flat_patches.push_back({0, std::numeric_limits<double>::infinity()});
  data.orientable = Orientability::Orientable;
  return IntrinsicMesh(std::move(data));
}

IntrinsicMesh flat_disk(double radius, int n_boundary, int rings) {
  if (!(radius > 0.0)) throw ValidationError("flat_disk: radius must be positive");
  if (n_boundary < 3) throw ValidationError("flat_disk: need at least 3 boundary vertices");
  if (rings <= 0) rings = std::max(1, static_cast<int>(std::lround(n_boundary / (2.0 * kPi))));

  const int n = n_boundary;
  MeshData data;
  data.vertex_count = 1 + rings * n;
  auto vid = [n](int ring, int j) { return 1 + (ring - 1) * n + ((j % n + n) % n); };
  auto vpos = [&](int ring, int j) -> Eigen::Vector2d {
    const double rr = radius * ring / rings;
    const double th = 2.0 * kPi * j / n;
    return {rr * std::cos(th), rr * std::sin(th)};
  };

  for (int j = 0; j < n; ++j) {
    data.faces.push_back({0, vid(1, j), vid(1, j + 1)});
    add_edge(data, 0, vid(1, j), vpos(1, j).norm());
    add_edge(data, vid(1, j), vid(1, j + 1), (vpos(1, j) - vpos(1, j + 1)).norm());
  }
  for (int ring = 1; ring < rings; ++ring) {
    for (int j = 0; j < n; ++j) {
      const int a = vid(ring, j), b = vid(ring, j + 1);
      const int c = vid(ring + 1, j), d = vid(ring + 1, j + 1);
      // shorter diagonal of the planar quad (a, b, d, c)
      const double diag_ad = (vpos(ring, j) - vpos(ring + 1, j + 1)).norm();
      const double diag_bc = (vpos(ring, j + 1) - vpos(ring + 1, j)).norm();
      if (diag_ad <= diag_bc) {
        data.faces.push_back({a, c, d});
        data.faces.push_back({a, d, b});
        add_edge(data, a, d, diag_ad);
      } else {
        data.faces.push_back({a, c, b});
        data.faces.push_back({b, c, d});
        add_edge(data, b, c, diag_bc);
      }
      add_edge(data, a, c, (vpos(ring, j) - vpos(ring + 1, j)).norm());
      add_edge(data, c, d, (vpos(ring + 1, j) - vpos(ring + 1, j + 1)).norm());
    }
  }

  BoundaryLoop loop;
  loop.vertices.resize(n);
  loop.angles.resize(n);
  for (int j = 0; j < n; ++j) {
    loop.vertices[j] = vid(rings, j);
    loop.angles[j] = 2.0 * kPi * j / n;
  }
  data.boundary_loops.push_back(std::move(loop));
  data.flat_patches.push_back({0, std::numeric_limits<double>::infinity()});
  data.orientable = Orientability::Orientable;
  return IntrinsicMesh(std::move(data));
}

IntrinsicMesh cylinder_band(double half_length, int n_circle, int rings) {
  if (!(half_length > 0.0)) throw ValidationError("cylinder: half length must be positive");
  if (n_circle < 3) throw ValidationError("cylinder: need at least 3 circle vertices");
  const double width = 2.0 * kPi / n_circle;
  if (rings <= 0)
    rings = std::max(2, static_cast<int>(std::ceil(2.0 * half_length / (2.0 * width))));

  const int n = n_circle;
  const int m = rings;  // m+1 rings of vertices
  MeshData data;
  data.vertex_count = (m + 1) * n;
  auto vid = [n](int i, int j) { return i * n + ((j % n + n) % n); };
  const double dt = 2.0 * half_length / m;
  const double diag = std::hypot(width, dt);

  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      const int a = vid(i, j), b = vid(i, j + 1);
      const int c = vid(i + 1, j), d = vid(i + 1, j + 1);
      data.faces.push_back({a, b, d});
      data.faces.push_back({a, d, c});
      add_edge(data, a, b, width);
      add_edge(data, a, c, dt);
      add_edge(data, a, d, diag);
    }
  }
  for (int j = 0; j < n; ++j) add_edge(data, vid(m, j), vid(m, j + 1), width);

  for (int side = 0; side < 2; ++side) {
    BoundaryLoop loop;
    loop.vertices.resize(n);
    loop.angles.resize(n);
    for (int j = 0; j < n; ++j) {
      loop.vertices[j] = vid(side == 0 ? 0 : m, j);
      loop.angles[j] = 2.0 * kPi * j / n;
    }
    data.boundary_loops.push_back(std::move(loop));
  }
  data.flat_patches.push_back({0, std::numeric_limits<double>::infinity()});
  data.orientable = Orientability::Orientable;
  return IntrinsicMesh(std::move(data));
}

IntrinsicMesh moebius_band(double length, int n_circle, int rings) {
  if (!(length > 0.0)) throw ValidationError("moebius: length must be positive");
  if (n_circle < 8) throw ValidationError("moebius: need circle resolution >= 8");
  if (n_circle % 2 != 0)
    throw ValidationError(
        "moebius: circle resolution must be even (antipodal core pairing)");
  const double width = 2.0 * kPi / n_circle;
  if (rings <= 0) rings = std::max(2, static_cast<int>(std::ceil(length / (2.0 * width))));

  const int n = n_circle;
  const int half = n / 2;
  const int m = rings;
  MeshData data;
  data.vertex_count = half + m * n;  // core ring + full rings 1..m
  auto core = [half](int j) { return (j % half + half) % half; };
  auto vid = [n, half](int i, int j) { return half + (i - 1) * n + ((j % n + n) % n); };
  const double dt = length / m;
  const double diag = std::hypot(width, dt);

  // Core strip: two sheets of quads share each core edge.
  for (int j = 0; j < n; ++j) {
    const int a = core(j), b = core(j + 1);
    const int c = vid(1, j), d = vid(1, j + 1);
    data.faces.push_back({a, b, d});
    data.faces.push_back({a, d, c});
    add_edge(data, a, b, width);
    add_edge(data, a, c, dt);
    add_edge(data, a, d, diag);
  }
  for (int i = 1; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      const int a = vid(i, j), b = vid(i, j + 1);
      const int c = vid(i + 1, j), d = vid(i + 1, j + 1);
      data.faces.push_back({a, b, d});
      data.faces.push_back({a, d, c});
      add_edge(data, a, b, width);
      add_edge(data, a, c, dt);
      add_edge(data, a, d, diag);
    }
  }
  for (int j = 0; j < n; ++j) add_edge(data, vid(m, j), vid(m, j + 1), width);

  BoundaryLoop loop;
  loop.vertices.resize(n);
  loop.angles.resize(n);
  for (int j = 0; j < n; ++j) {
    loop.vertices[j] = vid(m, j);
    loop.angles[j] = 2.0 * kPi * j / n;
  }
  data.boundary_loops.push_back(std::move(loop));
  data.flat_patches.push_back({0, std::numeric_limits<double>::infinity()});
  data.orientable = Orientability::Nonorientable;
  return IntrinsicMesh(std::move(data));
}

IntrinsicMesh build_primitive(const std::string& kind,
                              const std::map<std::string, double>& params) {
  auto get = [&params](const std::string& key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  };
  auto get_int = [&get](const std::string& key, int fallback) {
    return static_cast<int>(std::llround(get(key, fallback)));
  };

  if (kind == "icosphere") {
    return icosphere(get_int("subdiv", 3), get("flat_cap", 0.0));
  }
  if (kind == "flat_torus") {
    const Eigen::Vector2d u(get("ux", 1.0), get("uy", 0.0));
    const Eigen::Vector2d w(get("wx", 0.0), get("wy", 1.0));
    return flat_torus(get_int("nx", 32), get_int("ny", 32), u, w);
  }
  if (kind == "flat_disk") {
    return flat_disk(get("radius", 1.0), get_int("n", 32), get_int("rings", 0));
  }
  if (kind == "cylinder") {
    return cylinder_band(get("L", 1.0), get_int("n", 32), get_int("rings", 0));
  }
  if (kind == "moebius") {
    return moebius_band(get("L", 1.0), get_int("n", 32), get_int("rings", 0));
  }
  throw ValidationError("build_primitive: unknown kind '" + kind + "'");
}

}  // namespace specsurf
