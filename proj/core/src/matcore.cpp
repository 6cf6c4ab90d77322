// Copyright (c) 2026 the dynbc authors
// SPDX-License-Identifier: Apache-2.0

#include "dynbc/matcore.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace dynbc {

void require_finite(const CMat& a, const char* what) {
  if (!a.allFinite()) {
    std::ostringstream os;
    os << what << " contains NaN/Inf entries";
    throw InvalidSize(os.str());
  }
}

CMat solve_linear(const CMat& a, const CMat& b) {
  if (a.rows() != a.cols()) {
    throw DimensionMismatch("solve_linear: A must be square");
  }
  if (b.rows() != a.rows()) {
    throw DimensionMismatch("solve_linear: B row count does not match A");
  }
  Eigen::PartialPivLU<CMat> lu(a);
  const double amax = a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
  const double pivot_floor = 1e-14 * amax;
  const auto diag = lu.matrixLU().diagonal();
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    if (std::abs(diag[i]) <= pivot_floor) {
      throw SingularMatrix("solve_linear: pivot below 1e-14 * max|A|");
    }
  }
  return lu.solve(b);
}

std::vector<Complex> eigenvalues(const CMat& a) {
  if (a.rows() != a.cols() || a.rows() < 1) {
    throw DimensionMismatch("eigenvalues: A must be square, n >= 1");
  }
  Eigen::ComplexSchur<CMat> schur(a, /*computeU=*/false);
  if (schur.info() != Eigen::Success) {
    throw NoConvergence("eigenvalues: Schur iteration did not converge; partial results invalid");
  }
  std::vector<Complex> ev(static_cast<std::size_t>(a.rows()));
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    ev[static_cast<std::size_t>(i)] = schur.matrixT()(i, i);
  }
  std::sort(ev.begin(), ev.end(), [](Complex x, Complex y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  return ev;
}

double spectral_abscissa(const CMat& a) {
  double m = -std::numeric_limits<double>::infinity();
  for (Complex z : eigenvalues(a)) m = std::max(m, z.real());
  return m;
}

namespace {

// Diagonal Pade numerators for expm; Higham, "The scaling and squaring
// method for the matrix exponential revisited" (2005).
CMat pade_solve(const CMat& u, const CMat& v) {
  // r = (v - u)^{-1} (v + u)
  return solve_linear(v - u, v + u);
}

CMat expm_pade13(const CMat& a) {
  static const double b[] = {64764752532480000., 32382376266240000., 7771770303897600.,
                             1187353796428800.,  129060195264000.,   10559470521600.,
                             670442572800.,      33522128640.,       1323241920.,
                             40840800.,          960960.,            16380.,
                             182.,               1.};
  const Eigen::Index n = a.rows();
  const CMat id = CMat::Identity(n, n);
  const CMat a2 = a * a;
  const CMat a4 = a2 * a2;
  const CMat a6 = a2 * a4;
  const CMat u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
                      b[3] * a2 + b[1] * id);
  const CMat v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 +
                 b[2] * a2 + b[0] * id;
  return pade_solve(u, v);
}

CMat expm_pade_low(const CMat& a, int order) {
  static const double b3[] = {120., 60., 12., 1.};
  static const double b5[] = {30240., 15120., 3360., 420., 30., 1.};
  static const double b7[] = {17297280., 8648640., 1995840., 277200., 25200., 1512., 56., 1.};
  static const double b9[] = {17643225600., 8821612800., 2075673600., 302702400., 30270240.,
                              2162160.,     110880.,     3960.,       90.,        1.};
  const double* b = order == 3 ? b3 : order == 5 ? b5 : order == 7 ? b7 : b9;
  const Eigen::Index n = a.rows();
  const CMat id = CMat::Identity(n, n);
  const CMat a2 = a * a;
  CMat even = b[0] * id;  // V: even powers
  CMat odd = b[1] * id;   // U/a: odd powers divided by a
  CMat p = CMat::Identity(n, n);
  for (int k = 2; k <= order; k += 2) {
    p = p * a2;
    even += b[k] * p;
    if (k + 1 <= order) odd += b[k + 1] * p;
  }
  const CMat u = a * odd;
  return pade_solve(u, even);
}

}  // namespace

CMat matrix_exponential(const CMat& a, double t) {
  if (a.rows() != a.cols()) {
    throw DimensionMismatch("matrix_exponential: A must be square");
  }
  require_finite(a, "matrix_exponential: A");
  if (!std::isfinite(t)) throw InvalidSize("matrix_exponential: t not finite");
  const Eigen::Index n = a.rows();
  if (n == 0) return CMat(0, 0);

  const CMat m = t * a;
  const double eta = m.cwiseAbs().colwise().sum().maxCoeff();  // 1-norm
  static const double theta3 = 1.495585217958292e-2;
  static const double theta5 = 2.539398330063230e-1;
  static const double theta7 = 9.504178996162932e-1;
  static const double theta9 = 2.097847961257068e0;
  static const double theta13 = 5.371920351148152e0;

  CMat r;
  int squarings = 0;
  if (eta <= theta3) {
    r = expm_pade_low(m, 3);
  } else if (eta <= theta5) {
    r = expm_pade_low(m, 5);
  } else if (eta <= theta7) {
    r = expm_pade_low(m, 7);
  } else if (eta <= theta9) {
    r = expm_pade_low(m, 9);
  } else {
    squarings = std::max(0, static_cast<int>(std::ceil(std::log2(eta / theta13))));
    const double scale = std::ldexp(1.0, -squarings);
    r = expm_pade13(m * scale);
    for (int s = 0; s < squarings; ++s) r = r * r;
  }
  if (!r.allFinite()) {
    throw Overflow("matrix_exponential: result exceeds floating-point range");
  }
  return r;
}

double operator_norm(const CMat& a) {
  if (a.size() == 0) return 0.0;
  require_finite(a, "operator_norm: A");
  Eigen::JacobiSVD<CMat> svd(a);
  return svd.singularValues()(0);
}

CMat resolvent(const CMat& a, Complex lambda) {
  if (a.rows() != a.cols()) {
    throw DimensionMismatch("resolvent: A must be square");
  }
  const Eigen::Index n = a.rows();
  CMat shifted = -a;
  shifted.diagonal().array() += lambda;
  try {
    return solve_linear(shifted, CMat::Identity(n, n));
  } catch (const SingularMatrix&) {
    throw LambdaInSpectrum("resolvent: lambda is in the spectrum (numerically)");
  }
}

SampledMatrixFunction::SampledMatrixFunction(std::vector<double> grid, std::vector<CMat> vals)
    : time_grid(std::move(grid)), samples(std::move(vals)) {
  if (time_grid.size() != samples.size()) {
    throw GridMismatch("SampledMatrixFunction: grid/sample count mismatch");
  }
  if (time_grid.empty() || time_grid.front() != 0.0) {
    throw GridMismatch("SampledMatrixFunction: grid must start at 0");
  }
  const double h = time_grid.size() > 1 ? time_grid[1] - time_grid[0] : 0.0;
  for (std::size_t i = 1; i < time_grid.size(); ++i) {
    const double d = time_grid[i] - time_grid[i - 1];
    if (d <= 0.0 || std::abs(d - h) > 1e-12 * std::max(1.0, std::abs(time_grid.back()))) {
      throw GridMismatch("SampledMatrixFunction: grid must be uniform and increasing");
    }
    if (samples[i].rows() != samples[0].rows() || samples[i].cols() != samples[0].cols()) {
      throw GridMismatch("SampledMatrixFunction: sample shapes differ");
    }
  }
}

std::vector<double> SampledMatrixFunction::uniform_grid(double T, std::size_t steps) {
  std::vector<double> g(steps + 1);
  const double h = T / static_cast<double>(steps);
  for (std::size_t i = 0; i <= steps; ++i) g[i] = h * static_cast<double>(i);
  return g;
}

SampledMatrixFunction convolve(const SampledMatrixFunction& f, const SampledMatrixFunction& g) {
  if (f.size() != g.size()) throw GridMismatch("convolve: grid sizes differ");
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (std::abs(f.time_grid[i] - g.time_grid[i]) > 1e-12) {
      throw GridMismatch("convolve: time grids differ");
    }
  }
  if (f.cols() != g.rows()) throw GridMismatch("convolve: inner dimensions incompatible");
  const std::size_t n = f.size();
  const double h = f.step();
  std::vector<CMat> out(n);
  out[0] = CMat::Zero(f.rows(), g.cols());
  for (std::size_t i = 1; i < n; ++i) {
    CMat acc = 0.5 * (f.samples[i] * g.samples[0] + f.samples[0] * g.samples[i]);
    for (std::size_t j = 1; j < i; ++j) {
      acc.noalias() += f.samples[i - j] * g.samples[j];
    }
    out[i] = h * acc;
  }
  return SampledMatrixFunction(f.time_grid, std::move(out));
}

}  // namespace dynbc
