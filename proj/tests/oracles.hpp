// Independent reference computations used to freeze expected values in tests.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace oracles {

// Laplace eigenvalues of the flat torus R^2/(Z u + Z w): |2 pi B^{-T} k|^2
// over integer vectors k, sorted ascending with multiplicity.
inline std::vector<double> torus_eigenvalues(const Eigen::Vector2d& u,
                                             const Eigen::Vector2d& w, int count) {
  Eigen::Matrix2d B;
  B.col(0) = u;
  B.col(1) = w;
  const Eigen::Matrix2d Bdual = 2.0 * std::numbers::pi * B.inverse().transpose();
  std::vector<double> vals;
  const int R = 16 + static_cast<int>(std::sqrt(static_cast<double>(count)));
  for (int k1 = -R; k1 <= R; ++k1)
    for (int k2 = -R; k2 <= R; ++k2)
      vals.push_back((Bdual * Eigen::Vector2d(k1, k2)).squaredNorm());
  std::sort(vals.begin(), vals.end());
  vals.resize(count);
  return vals;
}

// Round unit sphere: lambda = l(l+1) with multiplicity 2l+1.
inline std::vector<double> sphere_eigenvalues(int count) {
  std::vector<double> vals;
  for (int l = 0; static_cast<int>(vals.size()) < count; ++l)
    for (int m = 0; m < 2 * l + 1; ++m) vals.push_back(static_cast<double>(l * (l + 1)));
  vals.resize(count);
  return vals;
}

// Ordinary least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oracles
