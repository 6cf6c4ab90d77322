// Copyright (c) 2026 the dynbc authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "dynbc/errors.hpp"

namespace dynbc {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

/// Throws InvalidSize if any entry is NaN or Inf.
void require_finite(const CMat& a, const char* what = "matrix");

/// Solves A X = B by partial-pivoting LU.
///
/// Throws SingularMatrix when a pivot magnitude falls below
/// 1e-14 * max|A_ij|, and DimensionMismatch on incompatible shapes.
CMat solve_linear(const CMat& a, const CMat& b);

/// Eigenvalues of a square matrix, with multiplicity, sorted by
/// (real part, imaginary part). Throws NoConvergence if the Schur
/// iteration fails to converge.
std::vector<Complex> eigenvalues(const CMat& a);

/// max Re of eigenvalues(a).
double spectral_abscissa(const CMat& a);

/// e^{tA} by scaling-and-squaring with diagonal Pade approximants
/// (orders 3/5/7/9/13 with the standard theta thresholds).
/// Throws Overflow if the result leaves the floating-point range.
CMat matrix_exponential(const CMat& a, double t);

/// Induced 2-norm (largest singular value).
double operator_norm(const CMat& a);

/// (lambda I - A)^{-1}. Throws LambdaInSpectrum when the shifted
/// matrix is numerically singular.
CMat resolvent(const CMat& a, Complex lambda);

/// A matrix-valued function sampled on a uniform time grid starting at 0.
struct SampledMatrixFunction {
  std::vector<double> time_grid;
  std::vector<CMat> samples;

  SampledMatrixFunction() = default;
  SampledMatrixFunction(std::vector<double> grid, std::vector<CMat> vals);

  std::size_t size() const { return time_grid.size(); }
  double step() const { return time_grid.size() > 1 ? time_grid[1] - time_grid[0] : 0.0; }
  Eigen::Index rows() const { return samples.empty() ? 0 : samples.front().rows(); }
  Eigen::Index cols() const { return samples.empty() ? 0 : samples.front().cols(); }

  /// Uniform grid with steps+1 points on [0, T].
  static std::vector<double> uniform_grid(double T, std::size_t steps);
};

/// Convolution (F*G)(t_i) = int_0^{t_i} F(t_i - s) G(s) ds by the composite
/// trapezoid rule on the shared grid; (F*G)(0) = 0 exactly.
/// Throws GridMismatch if the grids differ or inner dimensions clash.
SampledMatrixFunction convolve(const SampledMatrixFunction& f,
                               const SampledMatrixFunction& g);

}  // namespace dynbc
