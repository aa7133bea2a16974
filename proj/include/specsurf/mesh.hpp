#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "specsurf/common.hpp"

namespace specsurf {

enum class Orientability { Unknown, Orientable, Nonorientable };

/// Marks the open metric ball B(center, radius) as exactly Euclidean.
/// radius = +infinity declares the whole mesh flat.
struct FlatPatch {
  int center = -1;
  double radius = 0.0;
};

/// Ordered boundary cycle with an angular parameterization in [0, 2*pi).
/// angles[j] is the parameter of vertices[j]; consecutive vertices are joined
/// by boundary edges, and the cycle closes from back to front.
struct BoundaryLoop {
  std::vector<int> vertices;
  Eigen::VectorXd angles;
};

struct Violation {
  enum class Kind {
    IndexRange,
    NonPositiveLength,
    DuplicateEdge,
    TriangleInequality,
    NonManifoldEdge,
    IsolatedVertex,
    BoundaryLoopMismatch,
    BadLoopParam,
    FlatPatchAngle,
  };
  Kind kind;
  std::string detail;
};

/// Per-vertex nonnegative conformal weight (the density rho).
struct DensityField {
  Eigen::VectorXd values;

  static DensityField uniform(int n, double value = 1.0) {
    DensityField f;
    f.values = Eigen::VectorXd::Constant(n, value);
    return f;
  }
};

/// Construction input for IntrinsicMesh. Edge lengths are keyed by unordered
/// vertex pairs; every face edge must be covered exactly once.
struct MeshData {
  int vertex_count = 0;
  std::vector<std::array<int, 3>> faces;
  std::vector<std::pair<std::array<int, 2>, double>> edge_lengths;
  std::vector<BoundaryLoop> boundary_loops;
  std::vector<FlatPatch> flat_patches;
  Orientability orientable = Orientability::Unknown;
};

/// Triangulated surface carried purely by combinatorics and per-edge lengths.
/// Immutable after construction; all queries are const and thread-safe.
class IntrinsicMesh {
 public:
  explicit IntrinsicMesh(MeshData data);

  int vertex_count() const { return vertex_count_; }
  int face_count() const { return static_cast<int>(faces_.rows()); }
  int edge_count() const { return static_cast<int>(edges_.rows()); }

  const Eigen::MatrixX3i& faces() const { return faces_; }
  /// Edges sorted lexicographically with edges()(e,0) < edges()(e,1).
  const Eigen::MatrixX2i& edges() const { return edges_; }
  const Eigen::VectorXd& edge_lengths() const { return edge_lengths_; }

  /// Index of the undirected edge {i,j}, or -1 when absent.
  int edge_index(int i, int j) const;
  double edge_length(int i, int j) const;

  /// face_edges()(f,c) is the edge opposite corner c of face f.
  const Eigen::MatrixX3i& face_edges() const { return face_edges_; }
  /// Up to two incident faces per edge, -1 padded. Extra incidences beyond
  /// two are only reflected in edge_face_degree().
  const Eigen::MatrixX2i& edge_faces() const { return edge_faces_; }
  const Eigen::VectorXi& edge_face_degree() const { return edge_face_degree_; }

  const std::vector<std::vector<int>>& vertex_faces() const { return vertex_faces_; }
  bool is_boundary_vertex(int v) const { return boundary_vertex_[v] != 0; }

  const std::vector<BoundaryLoop>& boundary_loops() const { return boundary_loops_; }
  const std::vector<FlatPatch>& flat_patches() const { return flat_patches_; }
  Orientability orientable_hint() const { return orientable_; }

  /// Lengths of the edges opposite each corner of face f.
  std::array<double, 3> face_corner_lengths(int f) const;
  /// Interior angle at corner c of face f, from the law of cosines.
  double corner_angle(int f, int c) const;
  /// Heron area of face f.
  double face_area(int f) const;

 private:
  int vertex_count_ = 0;
  Eigen::MatrixX3i faces_;
  Eigen::MatrixX2i edges_;
  Eigen::VectorXd edge_lengths_;
  Eigen::MatrixX3i face_edges_;
  Eigen::MatrixX2i edge_faces_;
  Eigen::VectorXi edge_face_degree_;
  std::vector<std::vector<int>> vertex_faces_;
  std::vector<char> boundary_vertex_;
  std::vector<BoundaryLoop> boundary_loops_;
  std::vector<FlatPatch> flat_patches_;
  Orientability orientable_ = Orientability::Unknown;
  std::unordered_map<std::int64_t, int> edge_lookup_;
};

std::vector<Violation> validate(const IntrinsicMesh& mesh);
std::string violation_to_string(const Violation& v);

int euler_char(const IntrinsicMesh& mesh);
Orientability orientability(const IntrinsicMesh& mesh);
int connected_components(const IntrinsicMesh& mesh);

double area(const IntrinsicMesh& mesh);
double area(const IntrinsicMesh& mesh, const DensityField& rho);

/// Plain-text IMESH v1 format. Writes are deterministic; comment lines are
/// emitted after the header with a leading '#'.
void save(const IntrinsicMesh& mesh, const std::string& path,
          const std::vector<std::string>& comments = {});
IntrinsicMesh load(const std::string& path);

/// Graph (Dijkstra) distances from a source vertex, cut off at max_distance.
/// Unreached vertices hold +infinity.
Eigen::VectorXd graph_distances(const IntrinsicMesh& mesh, int source,
                                double max_distance);

}  // namespace specsurf
