#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <cstdint>
#include <string>

#include "specsurf/mesh.hpp"

namespace specsurf {

/// Cotangent stiffness: symmetric PSD, zero row sums, kernel spanned by the
/// indicators of connected components.
using StiffnessMatrix = Eigen::SparseMatrix<double>;

/// Lumped (diagonal) mass: m_i = sum over faces at i of area/3 times the
/// face-average density. Entries may vanish where the density does.
struct MassMatrix {
  Eigen::VectorXd diagonal;

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const {
    return diagonal.cwiseProduct(x);
  }
  double inner(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
    return x.dot(diagonal.cwiseProduct(y));
  }
  double trace() const { return diagonal.sum(); }
};

StiffnessMatrix assemble_stiffness(const IntrinsicMesh& mesh);
MassMatrix assemble_mass(const IntrinsicMesh& mesh, const DensityField& rho);

struct SolveOptions {
  double tol = 1e-9;                // residual tolerance, relative to ||S phi||
  std::uint64_t seed = 12345;       // start-vector seed; runs are reproducible
  int max_restarts = 12;
  int lanczos_steps = 0;            // 0 = automatic
  double cluster_rel_tol = 1e-4;    // lambda_1 multiplicity threshold
};

/// Eigenpairs of the pencil S phi = lambda M phi, ascending.
struct SpectrumResult {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;   // V x m, mass-orthonormal
  Eigen::VectorXd residuals;      // ||S phi - lambda M phi||_2 per pair
  int first_multiplicity = 0;     // cluster size at lambda_1
  int kernel_dimension = 0;       // eigenvalues at zero
  double cluster_rel_tol = 1e-4;

  /// Index of the first nonzero eigenvalue (past the kernel).
  int lambda1_index() const { return kernel_dimension; }
  double lambda1() const { return eigenvalues[kernel_dimension]; }
};

/// Shift-invert Lanczos with full reorthogonalization and deflated restarts.
/// Restarting resolves eigenvalue multiplicities; a degenerate (diagonal)
/// mass kernel is excluded from the Rayleigh space through the S coupling.
SpectrumResult solve_smallest(const StiffnessMatrix& S, const MassMatrix& M, int count,
                              const SolveOptions& opts = {});

/// lambda_1 * area(mesh, rho); invariant under rho -> c rho.
double normalized_lambda1(const IntrinsicMesh& mesh, const DensityField& rho,
                          const SolveOptions& opts = {});

struct Eigenspace {
  Eigen::MatrixXd basis;   // V x k, mass-orthonormal first eigenfunctions
  int k = 0;
  double lambda1 = 0.0;
  double lambda_next = 0.0;  // first eigenvalue beyond the cluster
};

/// Collects all eigenpairs with lambda <= lambda_1 (1 + rel_tol). Throws when
/// the result holds too few pairs to certify the gap to lambda_{k+1}.
Eigenspace first_eigenspace(const SpectrumResult& result, double rel_tol = 1e-4);

/// Q(u, v) = u' S v - lambda_1 u' M v.
double quadratic_form_Q(const StiffnessMatrix& S, const MassMatrix& M, double lambda1,
                        const Eigen::VectorXd& u, const Eigen::VectorXd& v);

/// Mass-orthogonal projection onto the first eigenspace, componentwise.
Eigen::MatrixXd project_first_eigenspace(const Eigenspace& space, const MassMatrix& M,
                                         const Eigen::MatrixXd& U);

/// Coordinate text export, one "i j value" line per stored entry.
void write_matrix_coordinate(const StiffnessMatrix& S, const std::string& path);
void write_matrix_coordinate(const MassMatrix& M, const std::string& path);

}  // namespace specsurf
