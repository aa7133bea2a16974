#include "specsurf/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>

namespace specsurf {

namespace {

std::int64_t pack_edge(int i, int j) {
  if (i > j) std::swap(i, j);
  return (static_cast<std::int64_t>(i) << 32) | static_cast<std::int64_t>(j);
}

}  // namespace

IntrinsicMesh::IntrinsicMesh(MeshData data) {
  vertex_count_ = data.vertex_count;
  if (vertex_count_ <= 0) throw ValidationError("mesh: vertex count must be positive");

  const int nf = static_cast<int>(data.faces.size());
  faces_.resize(nf, 3);
  for (int f = 0; f < nf; ++f) {
    for (int c = 0; c < 3; ++c) {
      const int v = data.faces[f][c];
      if (v < 0 || v >= vertex_count_)
        throw ValidationError("mesh: face vertex index out of range: " + std::to_string(v));
      faces_(f, c) = v;
    }
    if (faces_(f, 0) == faces_(f, 1) || faces_(f, 1) == faces_(f, 2) ||
        faces_(f, 0) == faces_(f, 2))
      throw ValidationError("mesh: degenerate face with repeated vertex at face " +
                            std::to_string(f));
  }

  // Deduplicate edge lengths, requiring agreement on duplicates.
  std::unordered_map<std::int64_t, double> length_map;
  length_map.reserve(data.edge_lengths.size());
  for (const auto& [key, len] : data.edge_lengths) {
    if (key[0] < 0 || key[0] >= vertex_count_ || key[1] < 0 || key[1] >= vertex_count_)
      throw ValidationError("mesh: edge endpoint out of range");
    if (key[0] == key[1]) throw ValidationError("mesh: self-loop edge");
    auto [it, inserted] = length_map.emplace(pack_edge(key[0], key[1]), len);
    if (!inserted && it->second != len)
      throw ValidationError("mesh: contradictory duplicate edge length for {" +
                            std::to_string(key[0]) + "," + std::to_string(key[1]) + "}");
  }

  // Collect the edges actually used by faces; every one needs a length.
  std::vector<std::pair<std::int64_t, double>> edge_list;
  {
    std::unordered_map<std::int64_t, char> seen;
    seen.reserve(3 * data.faces.size());
    for (int f = 0; f < nf; ++f) {
      for (int c = 0; c < 3; ++c) {
        const int a = faces_(f, (c + 1) % 3);
        const int b = faces_(f, (c + 2) % 3);
        const std::int64_t key = pack_edge(a, b);
        if (seen.emplace(key, 1).second) {
          auto it = length_map.find(key);
          if (it == length_map.end())
            throw ValidationError("mesh: missing edge length for {" + std::to_string(a) +
                                  "," + std::to_string(b) + "}");
          edge_list.emplace_back(key, it->second);
        }
      }
    }
  }
  // Boundary-loop edges may exist without faces in degenerate inputs; all
  // loop segments must still carry lengths so save/load round-trips.
  for (const auto& loop : data.boundary_loops) {
    const int n = static_cast<int>(loop.vertices.size());
    for (int j = 0; j < n; ++j) {
      const int a = loop.vertices[j];
      const int b = loop.vertices[(j + 1) % n];
      if (a < 0 || a >= vertex_count_ || b < 0 || b >= vertex_count_)
        throw ValidationError("mesh: boundary loop vertex out of range");
    }
  }

  std::sort(edge_list.begin(), edge_list.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  const int ne = static_cast<int>(edge_list.size());
  edges_.resize(ne, 2);
  edge_lengths_.resize(ne);
  edge_lookup_.reserve(ne);
  for (int e = 0; e < ne; ++e) {
    const std::int64_t key = edge_list[e].first;
    edges_(e, 0) = static_cast<int>(key >> 32);
    edges_(e, 1) = static_cast<int>(key & 0xffffffff);
    edge_lengths_[e] = edge_list[e].second;
    edge_lookup_.emplace(key, e);
  }

  face_edges_.resize(nf, 3);
  edge_faces_ = Eigen::MatrixX2i::Constant(ne, 2, -1);
  edge_face_degree_ = Eigen::VectorXi::Zero(ne);
  for (int f = 0; f < nf; ++f) {
    for (int c = 0; c < 3; ++c) {
      const int a = faces_(f, (c + 1) % 3);
      const int b = faces_(f, (c + 2) % 3);
      const int e = edge_lookup_.at(pack_edge(a, b));
      face_edges_(f, c) = e;
      if (edge_face_degree_[e] < 2) edge_faces_(e, edge_face_degree_[e]) = f;
      edge_face_degree_[e] += 1;
    }
  }

  vertex_faces_.assign(vertex_count_, {});
  for (int f = 0; f < nf; ++f)
    for (int c = 0; c < 3; ++c) vertex_faces_[faces_(f, c)].push_back(f);

  boundary_vertex_.assign(vertex_count_, 0);
  for (int e = 0; e < ne; ++e) {
    if (edge_face_degree_[e] == 1) {
      boundary_vertex_[edges_(e, 0)] = 1;
      boundary_vertex_[edges_(e, 1)] = 1;
    }
  }

  boundary_loops_ = std::move(data.boundary_loops);
  flat_patches_ = std::move(data.flat_patches);
  orientable_ = data.orientable;
}

int IntrinsicMesh::edge_index(int i, int j) const {
  auto it = edge_lookup_.find(pack_edge(i, j));
  return it == edge_lookup_.end() ? -1 : it->second;
}

double IntrinsicMesh::edge_length(int i, int j) const {
  const int e = edge_index(i, j);
  if (e < 0)
    throw ValidationError("mesh: no edge {" + std::to_string(i) + "," + std::to_string(j) + "}");
  return edge_lengths_[e];
}

std::array<double, 3> IntrinsicMesh::face_corner_lengths(int f) const {
  return {edge_lengths_[face_edges_(f, 0)], edge_lengths_[face_edges_(f, 1)],
          edge_lengths_[face_edges_(f, 2)]};
}

double IntrinsicMesh::corner_angle(int f, int c) const {
  const auto l = face_corner_lengths(f);
  const double a = l[c];
  const double b = l[(c + 1) % 3];
  const double d = l[(c + 2) % 3];
  double cosv = (b * b + d * d - a * a) / (2.0 * b * d);
  cosv = std::clamp(cosv, -1.0, 1.0);
  return std::acos(cosv);
}

double IntrinsicMesh::face_area(int f) const {
  const auto l = face_corner_lengths(f);
  const double s = 0.5 * (l[0] + l[1] + l[2]);
  const double arg = s * (s - l[0]) * (s - l[1]) * (s - l[2]);
  return std::sqrt(std::max(0.0, arg));
}

std::string violation_to_string(const Violation& v) {
  const char* kind = nullptr;
  switch (v.kind) {
    case Violation::Kind::IndexRange: kind = "index-range"; break;
    case Violation::Kind::NonPositiveLength: kind = "non-positive-length"; break;
    case Violation::Kind::DuplicateEdge: kind = "duplicate-edge"; break;
    case Violation::Kind::TriangleInequality: kind = "triangle-inequality"; break;
    case Violation::Kind::NonManifoldEdge: kind = "non-manifold-edge"; break;
    case Violation::Kind::IsolatedVertex: kind = "isolated-vertex"; break;
    case Violation::Kind::BoundaryLoopMismatch: kind = "boundary-loop-mismatch"; break;
    case Violation::Kind::BadLoopParam: kind = "bad-loop-parameterization"; break;
    case Violation::Kind::FlatPatchAngle: kind = "flat-patch-angle"; break;
  }
  return std::string(kind) + ": " + v.detail;
}

std::vector<Violation> validate(const IntrinsicMesh& mesh) {
  std::vector<Violation> out;
  const auto add = [&out](Violation::Kind k, std::string detail) {
    out.push_back({k, std::move(detail)});
  };

  for (int e = 0; e < mesh.edge_count(); ++e) {
    if (!(mesh.edge_lengths()[e] > 0.0) || !std::isfinite(mesh.edge_lengths()[e]))
      add(Violation::Kind::NonPositiveLength,
          "edge {" + std::to_string(mesh.edges()(e, 0)) + "," +
              std::to_string(mesh.edges()(e, 1)) + "} has length " +
              std::to_string(mesh.edge_lengths()[e]));
  }

  // Strict triangle inequality on every face.
  for (int f = 0; f < mesh.face_count(); ++f) {
    const auto l = mesh.face_corner_lengths(f);
    for (int c = 0; c < 3; ++c) {
      if (!(l[c] < l[(c + 1) % 3] + l[(c + 2) % 3]))
        add(Violation::Kind::TriangleInequality,
            "face " + std::to_string(f) + " side " + std::to_string(l[c]) +
                " >= sum of the other two");
    }
  }

  // Interior edges carry exactly 2 faces, boundary edges exactly 1.
  std::vector<char> is_boundary_edge(mesh.edge_count(), 0);
  for (int e = 0; e < mesh.edge_count(); ++e) {
    const int deg = mesh.edge_face_degree()[e];
    if (deg == 1) {
      is_boundary_edge[e] = 1;
    } else if (deg == 0 || deg > 2) {
      add(Violation::Kind::NonManifoldEdge,
          "edge {" + std::to_string(mesh.edges()(e, 0)) + "," +
              std::to_string(mesh.edges()(e, 1)) + "} shared by " + std::to_string(deg) +
              " faces");
    }
  }

  for (int v = 0; v < mesh.vertex_count(); ++v) {
    if (mesh.vertex_faces()[v].empty())
      add(Violation::Kind::IsolatedVertex, "vertex " + std::to_string(v));
  }

  // Declared boundary loops must jointly cover the degree-1 edges.
  {
    std::vector<char> covered(mesh.edge_count(), 0);
    for (size_t li = 0; li < mesh.boundary_loops().size(); ++li) {
      const auto& loop = mesh.boundary_loops()[li];
      const int n = static_cast<int>(loop.vertices.size());
      if (n < 3) {
        add(Violation::Kind::BoundaryLoopMismatch,
            "loop " + std::to_string(li) + " has fewer than 3 vertices");
        continue;
      }
      if (loop.angles.size() != n)
        add(Violation::Kind::BadLoopParam,
            "loop " + std::to_string(li) + " angle count mismatch");
      for (int j = 0; j < loop.angles.size(); ++j) {
        const double a = loop.angles[j];
        if (!(a >= 0.0) || !(a < 2.0 * std::numbers::pi))
          add(Violation::Kind::BadLoopParam,
              "loop " + std::to_string(li) + " angle " + std::to_string(a) +
                  " outside [0, 2*pi)");
      }
      for (int j = 0; j < n; ++j) {
        const int a = loop.vertices[j];
        const int b = loop.vertices[(j + 1) % n];
        const int e = mesh.edge_index(a, b);
        if (e < 0 || !is_boundary_edge[e]) {
          add(Violation::Kind::BoundaryLoopMismatch,
              "loop " + std::to_string(li) + " segment {" + std::to_string(a) + "," +
                  std::to_string(b) + "} is not a boundary edge");
        } else {
          covered[e] = 1;
        }
      }
    }
    for (int e = 0; e < mesh.edge_count(); ++e) {
      if (is_boundary_edge[e] && !covered[e])
        add(Violation::Kind::BoundaryLoopMismatch,
            "boundary edge {" + std::to_string(mesh.edges()(e, 0)) + "," +
                std::to_string(mesh.edges()(e, 1)) + "} not on any declared loop");
    }
  }

  // Flat patches: interior vertices of the ball have angle sum 2*pi.
  for (const auto& patch : mesh.flat_patches()) {
    if (patch.center < 0 || patch.center >= mesh.vertex_count()) {
      add(Violation::Kind::IndexRange, "flat patch center out of range");
      continue;
    }
    std::vector<int> check;
    if (std::isinf(patch.radius)) {
      check.reserve(mesh.vertex_count());
      for (int v = 0; v < mesh.vertex_count(); ++v) check.push_back(v);
    } else {
      const Eigen::VectorXd dist = graph_distances(mesh, patch.center, patch.radius);
      for (int v = 0; v < mesh.vertex_count(); ++v)
        if (dist[v] < patch.radius) check.push_back(v);
    }
    for (int v : check) {
      if (mesh.is_boundary_vertex(v) || mesh.vertex_faces()[v].empty()) continue;
      double sum = 0.0;
      for (int f : mesh.vertex_faces()[v]) {
        for (int c = 0; c < 3; ++c)
          if (mesh.faces()(f, c) == v) sum += mesh.corner_angle(f, c);
      }
      if (std::abs(sum - 2.0 * std::numbers::pi) > 1e-9)
        add(Violation::Kind::FlatPatchAngle,
            "vertex " + std::to_string(v) + " angle sum deviates by " +
                std::to_string(sum - 2.0 * std::numbers::pi));
    }
  }

  return out;
}

int euler_char(const IntrinsicMesh& mesh) {
  return mesh.vertex_count() - mesh.edge_count() + mesh.face_count();
}

namespace {

// Orients faces by propagation; returns false on a parity conflict.
bool try_orient(const IntrinsicMesh& mesh) {
  const int nf = mesh.face_count();
  std::vector<int> flip(nf, -1);  // -1 unassigned, 0 keep, 1 reversed
  for (int seed = 0; seed < nf; ++seed) {
    if (flip[seed] >= 0) continue;
    flip[seed] = 0;
    std::vector<int> stack = {seed};
    while (!stack.empty()) {
      const int f = stack.back();
      stack.pop_back();
      for (int c = 0; c < 3; ++c) {
        const int e = mesh.face_edges()(f, c);
        if (mesh.edge_face_degree()[e] != 2) continue;
        const int g = mesh.edge_faces()(e, 0) == f ? mesh.edge_faces()(e, 1)
                                                   : mesh.edge_faces()(e, 0);
        // Direction of edge e within each face's cyclic order.
        const auto dir_in = [&mesh, e](int face, int flipped) {
          const int a = mesh.edges()(e, 0);
          const int b = mesh.edges()(e, 1);
          for (int k = 0; k < 3; ++k) {
            const int u = mesh.faces()(face, k);
            const int v = mesh.faces()(face, (k + 1) % 3);
            if (u == a && v == b) return flipped ? 1 : 0;
            if (u == b && v == a) return flipped ? 0 : 1;
          }
          return -1;
        };
        const int df = dir_in(f, flip[f]);
        const int want = 1 - df;  // neighbor must traverse the edge oppositely
        const int dg0 = dir_in(g, 0);
        const int need_flip = (dg0 == want) ? 0 : 1;
        if (flip[g] < 0) {
          flip[g] = need_flip;
          stack.push_back(g);
        } else if (flip[g] != need_flip) {
          return false;
        }
      }
    }
  }
  return true;
}

}  // namespace

Orientability orientability(const IntrinsicMesh& mesh) {
  return try_orient(mesh) ? Orientability::Orientable : Orientability::Nonorientable;
}

int connected_components(const IntrinsicMesh& mesh) {
  std::vector<int> comp(mesh.vertex_count(), -1);
  int n = 0;
  for (int seed = 0; seed < mesh.vertex_count(); ++seed) {
    if (comp[seed] >= 0) continue;
    comp[seed] = n;
    std::vector<int> stack = {seed};
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int f : mesh.vertex_faces()[v]) {
        for (int c = 0; c < 3; ++c) {
          const int u = mesh.faces()(f, c);
          if (comp[u] < 0) {
            comp[u] = n;
            stack.push_back(u);
          }
        }
      }
    }
    ++n;
  }
  return n;
}

double area(const IntrinsicMesh& mesh) {
  double total = 0.0;
  for (int f = 0; f < mesh.face_count(); ++f) total += mesh.face_area(f);
  return total;
}

double area(const IntrinsicMesh& mesh, const DensityField& rho) {
  if (rho.values.size() != mesh.vertex_count())
    throw ValidationError("area: density size mismatch");
  double total = 0.0;
  for (int f = 0; f < mesh.face_count(); ++f) {
    const double mean = (rho.values[mesh.faces()(f, 0)] + rho.values[mesh.faces()(f, 1)] +
                         rho.values[mesh.faces()(f, 2)]) /
                        3.0;
    total += mesh.face_area(f) * mean;
  }
  return total;
}

namespace {

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

void save(const IntrinsicMesh& mesh, const std::string& path,
          const std::vector<std::string>& comments) {
  std::ofstream out(path);
  if (!out) throw ValidationError("save: cannot open " + path);
  out << "IMESH v1 " << mesh.vertex_count() << " " << mesh.face_count() << " "
      << mesh.boundary_loops().size() << "\n";
  for (const auto& c : comments) out << "# " << c << "\n";
  for (int f = 0; f < mesh.face_count(); ++f)
    out << "f " << mesh.faces()(f, 0) << " " << mesh.faces()(f, 1) << " "
        << mesh.faces()(f, 2) << "\n";
  for (int e = 0; e < mesh.edge_count(); ++e)
    out << "e " << mesh.edges()(e, 0) << " " << mesh.edges()(e, 1) << " "
        << format_double(mesh.edge_lengths()[e]) << "\n";
  for (const auto& loop : mesh.boundary_loops()) {
    out << "b " << loop.vertices.size();
    for (size_t j = 0; j < loop.vertices.size(); ++j)
      out << " " << loop.vertices[j] << " " << format_double(loop.angles[j]);
    out << "\n";
  }
  for (const auto& patch : mesh.flat_patches())
    out << "p " << patch.center << " " << format_double(patch.radius) << "\n";
  switch (mesh.orientable_hint()) {
    case Orientability::Orientable: out << "o yes\n"; break;
    case Orientability::Nonorientable: out << "o no\n"; break;
    case Orientability::Unknown: out << "o unknown\n"; break;
  }
  if (!out) throw ValidationError("save: write failure on " + path);
}

IntrinsicMesh load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("load: cannot open " + path);

  auto fail = [&path](int line, const std::string& msg) -> ValidationError {
    return ValidationError("load: " + path + ":" + std::to_string(line) + ": " + msg);
  };

  std::string line;
  int lineno = 0;
  if (!std::getline(in, line)) throw fail(1, "empty file");
  ++lineno;
  MeshData data;
  int nf = 0, nb = 0;
  {
    std::istringstream hs(line);
    std::string magic, version;
    if (!(hs >> magic >> version >> data.vertex_count >> nf >> nb) || magic != "IMESH" ||
        version != "v1")
      throw fail(lineno, "bad header, expected 'IMESH v1 <V> <F> <B>'");
  }
  if (data.vertex_count <= 0) throw fail(lineno, "non-positive vertex count");
  if (nf < 0 || nb < 0) throw fail(lineno, "negative counts in header");

  auto check_vertex = [&](int v, int at) {
    if (v < 0 || v >= data.vertex_count)
      throw fail(at, "vertex index " + std::to_string(v) + " out of range [0," +
                         std::to_string(data.vertex_count - 1) + "]");
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "f") {
      std::array<int, 3> f{};
      if (!(ls >> f[0] >> f[1] >> f[2])) throw fail(lineno, "bad face line");
      for (int v : f) check_vertex(v, lineno);
      data.faces.push_back(f);
    } else if (tag == "e") {
      int i = 0, j = 0;
      double len = 0.0;
      if (!(ls >> i >> j >> len)) throw fail(lineno, "bad edge line");
      check_vertex(i, lineno);
      check_vertex(j, lineno);
      if (!(len > 0.0) || !std::isfinite(len))
        throw fail(lineno, "edge length must be positive, got " + std::to_string(len));
      data.edge_lengths.push_back({{i, j}, len});
    } else if (tag == "b") {
      int n = 0;
      if (!(ls >> n) || n < 3) throw fail(lineno, "bad boundary loop count");
      BoundaryLoop loop;
      loop.vertices.resize(n);
      loop.angles.resize(n);
      for (int j = 0; j < n; ++j) {
        if (!(ls >> loop.vertices[j] >> loop.angles[j]))
          throw fail(lineno, "truncated boundary loop line");
        check_vertex(loop.vertices[j], lineno);
      }
      data.boundary_loops.push_back(std::move(loop));
    } else if (tag == "p") {
      FlatPatch patch;
      if (!(ls >> patch.center >> patch.radius)) throw fail(lineno, "bad flat patch line");
      check_vertex(patch.center, lineno);
      data.flat_patches.push_back(patch);
    } else if (tag == "o") {
      std::string flag;
      if (!(ls >> flag)) throw fail(lineno, "bad orientability line");
      if (flag == "yes")
        data.orientable = Orientability::Orientable;
      else if (flag == "no")
        data.orientable = Orientability::Nonorientable;
      else if (flag == "unknown")
        data.orientable = Orientability::Unknown;
      else
        throw fail(lineno, "orientability must be yes/no/unknown");
    } else {
      throw fail(lineno, "unknown record '" + tag + "'");
    }
  }
  if (static_cast<int>(data.faces.size()) != nf)
    throw fail(lineno, "face count mismatch with header");
  if (static_cast<int>(data.boundary_loops.size()) != nb)
    throw fail(lineno, "boundary loop count mismatch with header");

  try {
    return IntrinsicMesh(std::move(data));
  } catch (const ValidationError& err) {
    throw ValidationError("load: " + path + ": " + err.what());
  }
}

Eigen::VectorXd graph_distances(const IntrinsicMesh& mesh, int source, double max_distance) {
  const double inf = std::numeric_limits<double>::infinity();
  Eigen::VectorXd dist = Eigen::VectorXd::Constant(mesh.vertex_count(), inf);
  if (source < 0 || source >= mesh.vertex_count())
    throw ValidationError("graph_distances: source out of range");

  // Neighbor lists from edges.
  std::vector<std::vector<std::pair<int, double>>> adj(mesh.vertex_count());
  for (int e = 0; e < mesh.edge_count(); ++e) {
    const int a = mesh.edges()(e, 0);
    const int b = mesh.edges()(e, 1);
    adj[a].push_back({b, mesh.edge_lengths()[e]});
    adj[b].push_back({a, mesh.edge_lengths()[e]});
  }

  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  dist[source] = 0.0;
  heap.push({0.0, source});
  while (!heap.empty()) {
    const auto [d, v] = heap.top();
    heap.pop();
    if (d > dist[v]) continue;
    if (d > max_distance) break;
    for (const auto& [u, len] : adj[v]) {
      const double nd = d + len;
      if (nd < dist[u]) {
        dist[u] = nd;
        heap.push({nd, u});
      }
    }
  }
  return dist;
}

}  // namespace specsurf
