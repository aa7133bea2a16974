#include "specsurf/spectrum.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

namespace specsurf {

StiffnessMatrix assemble_stiffness(const IntrinsicMesh& mesh) {
  const int n = mesh.vertex_count();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(12 * mesh.face_count());
  for (int f = 0; f < mesh.face_count(); ++f) {
    for (int c = 0; c < 3; ++c) {
      const double angle = mesh.corner_angle(f, c);
      if (angle < 1e-12 || angle > std::numbers::pi - 1e-12)
        throw NumericalError("assemble_stiffness: degenerate angle in face " +
                             std::to_string(f));
      const double w = 0.5 / std::tan(angle);
      const int a = mesh.faces()(f, (c + 1) % 3);
      const int b = mesh.faces()(f, (c + 2) % 3);
      trips.emplace_back(a, b, -w);
      trips.emplace_back(b, a, -w);
      trips.emplace_back(a, a, w);
      trips.emplace_back(b, b, w);
    }
  }
  StiffnessMatrix S(n, n);
  S.setFromTriplets(trips.begin(), trips.end());
  S.makeCompressed();
  return S;
}

MassMatrix assemble_mass(const IntrinsicMesh& mesh, const DensityField& rho) {
  if (rho.values.size() != mesh.vertex_count())
    throw ValidationError("assemble_mass: density size mismatch");
  if ((rho.values.array() < 0.0).any())
    throw ValidationError("assemble_mass: density must be nonnegative");
  if (rho.values.maxCoeff() <= 0.0)
    throw ValidationError("assemble_mass: density is identically zero");

  Eigen::VectorXd diag = Eigen::VectorXd::Zero(mesh.vertex_count());
  for (int f = 0; f < mesh.face_count(); ++f) {
    const int i = mesh.faces()(f, 0);
    const int j = mesh.faces()(f, 1);
    const int k = mesh.faces()(f, 2);
    const double third = mesh.face_area(f) / 3.0;
    const double mean = (rho.values[i] + rho.values[j] + rho.values[k]) / 3.0;
    diag[i] += third * mean;
    diag[j] += third * mean;
    diag[k] += third * mean;
  }
  return MassMatrix{std::move(diag)};
}

namespace {

Eigen::VectorXd seeded_vector(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) {
    // uniform in [-1, 1] straight from the generator bits, for reproducibility
    const double u = static_cast<double>(rng() >> 11) * (1.0 / 4503599627370496.0);
    v[i] = 2.0 * u - 1.0;
  }
  return v;
}

struct RitzPair {
  double lambda;
  Eigen::VectorXd vec;  // mass-normalized
  double residual;
};

}  // namespace

SpectrumResult solve_smallest(const StiffnessMatrix& S, const MassMatrix& M, int count,
                              const SolveOptions& opts) {
  const int n = static_cast<int>(S.rows());
  if (S.cols() != n || M.diagonal.size() != n)
    throw ValidationError("solve_smallest: inconsistent pencil sizes");
  if (count < 1 || count > n) throw ValidationError("solve_smallest: bad count");
  if (M.diagonal.maxCoeff() <= 0.0) throw ValidationError("solve_smallest: zero mass");

  const double mean_diag = S.diagonal().mean();
  const double sigma = -1e-6 * mean_diag;

  StiffnessMatrix K = S;
  {
    // K = S - sigma M, M diagonal
    StiffnessMatrix D(n, n);
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(n);
    for (int i = 0; i < n; ++i) trips.emplace_back(i, i, -sigma * M.diagonal[i]);
    D.setFromTriplets(trips.begin(), trips.end());
    K += D;
  }
  K.makeCompressed();

  Eigen::SimplicialLDLT<StiffnessMatrix> ldlt(K);
  if (ldlt.info() != Eigen::Success)
    throw NumericalError("solve_smallest: shifted factorization failed");

  const auto op = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return ldlt.solve(M.apply(x));
  };
  const auto m_norm = [&](const Eigen::VectorXd& x) { return std::sqrt(std::max(0.0, M.inner(x, x))); };

  const double s_scale = std::max(mean_diag, 1e-300);
  std::vector<RitzPair> converged;
  double best_unconverged_residual = std::numeric_limits<double>::infinity();

  int steps = opts.lanczos_steps > 0 ? opts.lanczos_steps
                                     : std::clamp(3 * count + 30, 50, 160);
  bool settled = false;
  for (int restart = 0; restart < opts.max_restarts && !settled; ++restart) {
    const int have = static_cast<int>(converged.size());
    if (have >= count && restart > 0) settled = true;  // one extra pass after filling up

    // Deflation matrix view.
    Eigen::MatrixXd X(n, have);
    for (int i = 0; i < have; ++i) X.col(i) = converged[i].vec;
    const auto deflate = [&](Eigen::VectorXd& w) {
      if (have == 0) return;
      w.noalias() -= X * (X.transpose() * M.apply(w));
    };

    Eigen::VectorXd r = op(seeded_vector(n, opts.seed + 7919 * restart));
    deflate(r);
    deflate(r);
    double beta = m_norm(r);
    if (beta < 1e-300) continue;

    const int m = std::min(steps, n - have);
    if (m < 1) break;
    Eigen::MatrixXd V(n, m);
    Eigen::VectorXd alphas(m), betas(m);
    V.col(0) = r / beta;
    Eigen::VectorXd v_prev = Eigen::VectorXd::Zero(n);
    double beta_prev = 0.0;
    int built = 0;
    for (int j = 0; j < m; ++j) {
      Eigen::VectorXd w = op(V.col(j));
      deflate(w);
      const double alpha = V.col(j).dot(M.apply(w));
      w.noalias() -= alpha * V.col(j);
      if (j > 0) w.noalias() -= beta_prev * v_prev;
      // full reorthogonalization, twice
      auto Vj = V.leftCols(j + 1);
      w.noalias() -= Vj * (Vj.transpose() * M.apply(w));
      w.noalias() -= Vj * (Vj.transpose() * M.apply(w));
      alphas[j] = alpha;
      const double b = m_norm(w);
      built = j + 1;
      if (b < 1e-14 * std::abs(alphas.head(j + 1).cwiseAbs().maxCoeff())) {
        betas[j] = 0.0;
        break;
      }
      betas[j] = b;
      if (j + 1 < m) {
        v_prev = V.col(j);
        beta_prev = b;
        V.col(j + 1) = w / b;
      }
    }
    if (built == 0) continue;

    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(built, built);
    for (int j = 0; j < built; ++j) {
      T(j, j) = alphas[j];
      if (j + 1 < built) T(j, j + 1) = T(j + 1, j) = betas[j];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    if (es.info() != Eigen::Success)
      throw NumericalError("solve_smallest: tridiagonal eigensolve failed");

    // Largest nu first: smallest pencil eigenvalues.
    for (int idx = built - 1; idx >= 0; --idx) {
      const double nu = es.eigenvalues()[idx];
      if (!(nu > 1e-14 / std::max(std::abs(sigma), 1e-300))) continue;
      const double lambda = sigma + 1.0 / nu;
      Eigen::VectorXd phi = V.leftCols(built) * es.eigenvectors().col(idx);
      const double nrm = m_norm(phi);
      if (nrm < 1e-300) continue;
      phi /= nrm;
      const Eigen::VectorXd Sphi = S * phi;
      const double res = (Sphi - lambda * M.apply(phi)).norm();
      // Kernel modes have ||S phi|| ~ 0; an operator-scale floor keeps the
      // acceptance test meaningful for them.
      const double ref = std::max({Sphi.norm(), std::abs(lambda) * M.apply(phi).norm(),
                                   1e-4 * s_scale * phi.norm()});
      if (res <= opts.tol * ref) {
        // Keep only directions genuinely new relative to converged ones.
        Eigen::VectorXd q = phi;
        for (const auto& c : converged) q -= c.vec * M.inner(c.vec, q);
        if (m_norm(q) > 1e-6) converged.push_back({lambda, phi, res});
      } else {
        best_unconverged_residual = std::min(best_unconverged_residual, res / ref);
      }
      if (static_cast<int>(converged.size()) >= count + 4) break;
    }
  }

  if (static_cast<int>(converged.size()) < count)
    throw NumericalError(
        "solve_smallest: did not converge " + std::to_string(count) + " pairs (got " +
        std::to_string(converged.size()) + ", best unconverged relative residual " +
        std::to_string(best_unconverged_residual) + ")");

  std::sort(converged.begin(), converged.end(),
            [](const RitzPair& a, const RitzPair& b) { return a.lambda < b.lambda; });
  converged.resize(count);

  SpectrumResult out;
  out.eigenvalues.resize(count);
  out.eigenvectors.resize(n, count);
  out.residuals.resize(count);
  for (int i = 0; i < count; ++i) {
    out.eigenvalues[i] = converged[i].lambda;
    out.eigenvectors.col(i) = converged[i].vec;
    out.residuals[i] = converged[i].residual;
  }

  // Re-orthonormalize within clusters (Gram-Schmidt in the mass inner product).
  for (int i = 0; i < count; ++i) {
    Eigen::VectorXd v = out.eigenvectors.col(i);
    for (int j = 0; j < i; ++j)
      v -= out.eigenvectors.col(j) * M.inner(out.eigenvectors.col(j), v);
    const double nrm = std::sqrt(std::max(M.inner(v, v), 0.0));
    if (nrm > 1e-12) out.eigenvectors.col(i) = v / nrm;
  }

  const double lambda_max = std::abs(out.eigenvalues[count - 1]);
  const double kernel_tol = 1e-9 * std::max(lambda_max, 1e-30);
  out.kernel_dimension = 0;
  while (out.kernel_dimension < count && out.eigenvalues[out.kernel_dimension] <= kernel_tol)
    ++out.kernel_dimension;
  if (out.kernel_dimension == 0)
    throw NumericalError("solve_smallest: constant mode missing from the computed set");

  out.cluster_rel_tol = opts.cluster_rel_tol;
  if (out.kernel_dimension < count) {
    const double l1 = out.eigenvalues[out.kernel_dimension];
    int k = 0;
    for (int i = out.kernel_dimension; i < count; ++i)
      if (out.eigenvalues[i] <= l1 * (1.0 + opts.cluster_rel_tol)) ++k;
    out.first_multiplicity = k;
  }
  return out;
}

double normalized_lambda1(const IntrinsicMesh& mesh, const DensityField& rho,
                          const SolveOptions& opts) {
  const StiffnessMatrix S = assemble_stiffness(mesh);
  const MassMatrix M = assemble_mass(mesh, rho);
  const int count = std::min(mesh.vertex_count(), 4);
  const SpectrumResult result = solve_smallest(S, M, count, opts);
  if (result.kernel_dimension >= result.eigenvalues.size())
    throw NumericalError("normalized_lambda1: no nonzero eigenvalue found");
  return result.lambda1() * area(mesh, rho);
}

Eigenspace first_eigenspace(const SpectrumResult& result, double rel_tol) {
  const int m = static_cast<int>(result.eigenvalues.size());
  const int start = result.kernel_dimension;
  if (start >= m)
    throw ValidationError("first_eigenspace: result contains only kernel modes");
  const double l1 = result.eigenvalues[start];
  int end = start;
  while (end < m && result.eigenvalues[end] <= l1 * (1.0 + rel_tol)) ++end;
  if (end >= m)
    throw ValidationError(
        "first_eigenspace: cluster reaches the last computed eigenvalue; request a "
        "larger count to certify the gap to lambda_{k+1}");
  Eigenspace space;
  space.k = end - start;
  space.basis = result.eigenvectors.middleCols(start, space.k);
  space.lambda1 = l1;
  space.lambda_next = result.eigenvalues[end];
  return space;
}

double quadratic_form_Q(const StiffnessMatrix& S, const MassMatrix& M, double lambda1,
                        const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  return u.dot(S * v) - lambda1 * M.inner(u, v);
}

Eigen::MatrixXd project_first_eigenspace(const Eigenspace& space, const MassMatrix& M,
                                         const Eigen::MatrixXd& U) {
  Eigen::MatrixXd MU = M.diagonal.asDiagonal() * U;
  return space.basis * (space.basis.transpose() * MU);
}

namespace {

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

void write_matrix_coordinate(const StiffnessMatrix& S, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("write_matrix_coordinate: cannot open " + path);
  for (int k = 0; k < S.outerSize(); ++k)
    for (StiffnessMatrix::InnerIterator it(S, k); it; ++it)
      out << it.row() << " " << it.col() << " " << format_double(it.value()) << "\n";
}

void write_matrix_coordinate(const MassMatrix& M, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("write_matrix_coordinate: cannot open " + path);
  for (int i = 0; i < M.diagonal.size(); ++i)
    out << i << " " << i << " " << format_double(M.diagonal[i]) << "\n";
}

}  // namespace specsurf
