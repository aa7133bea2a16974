#pragma once

#include <Eigen/Core>

#include <complex>

#include "specsurf/common.hpp"

namespace specsurf {

/// Gauss-Legendre rule on [-1, 1], cached per order.
struct GaussLegendre {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};
const GaussLegendre& gauss_legendre(int n);

/// Nodes/weights mapped to [a, b].
void gauss_legendre_mapped(int n, double a, double b, Eigen::VectorXd& x,
                           Eigen::VectorXd& w);

/// Smooth (matrix-valued, complex) function of one variable, represented by
/// samples. Chebyshev-Lobatto profiles evaluate and differentiate to spectral
/// accuracy; uniform-node profiles go through a natural cubic spline. Both
/// back the axial mode functions of cylinder fields.
class ModeProfile {
 public:
  enum class Basis { Chebyshev, Spline };

  ModeProfile() = default;

  /// values_at_nodes: n x d samples at lobatto_nodes(n, a, b) (ascending).
  static ModeProfile chebyshev(double a, double b, Eigen::MatrixXcd values_at_nodes);
  /// values at strictly increasing nodes; natural cubic spline.
  static ModeProfile spline(Eigen::VectorXd nodes, Eigen::MatrixXcd values);

  static Eigen::VectorXd lobatto_nodes(int n, double a, double b);

  bool empty() const { return values_.rows() == 0; }
  int node_count() const { return static_cast<int>(values_.rows()); }
  int cols() const { return static_cast<int>(values_.cols()); }
  double domain_a() const { return a_; }
  double domain_b() const { return b_; }
  Basis basis() const { return basis_; }
  const Eigen::VectorXd& nodes() const { return nodes_; }
  const Eigen::MatrixXcd& values() const { return values_; }

  Eigen::RowVectorXcd eval(double t) const;
  Eigen::RowVectorXcd eval_derivative(double t) const;

  /// integral over the domain of sum_c (|u_c'|^2 + k2 |u_c|^2) dt.
  double energy(double k2) const;

  /// f(-t) on the mirrored domain; requires a symmetric domain a = -b.
  ModeProfile reflected() const;

  ModeProfile operator+(const ModeProfile& other) const;
  ModeProfile operator-(const ModeProfile& other) const;
  ModeProfile operator*(double scale) const;

 private:
  Basis basis_ = Basis::Chebyshev;
  double a_ = 0.0, b_ = 1.0;
  Eigen::VectorXd nodes_;
  Eigen::MatrixXcd values_;
  // spline second derivatives (natural boundary), Chebyshev: unused
  Eigen::MatrixXcd second_;
  // Chebyshev: cached derivative values at the nodes
  Eigen::MatrixXcd deriv_values_;

  void build();
  Eigen::RowVectorXcd eval_spline(double t, bool derivative) const;
};

/// Least-squares fit of log y = s log x + c; returns slope, intercept, and
/// the standard error of the slope.
struct PowerFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};
PowerFit fit_power_law(const Eigen::VectorXd& x, const Eigen::VectorXd& y);
/// Same with the model y = C x^s |log x| (log-corrected law).
PowerFit fit_power_law_logcorrected(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

}  // namespace specsurf
