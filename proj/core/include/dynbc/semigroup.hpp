// Copyright (c) 2026 the dynbc authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "dynbc/coupling.hpp"
#include "dynbc/matcore.hpp"

namespace dynbc {

/// Orbit of u' = G u sampled on a uniform grid, with the propagator norms.
struct EvolutionTrace {
  std::vector<double> time_grid;
  std::vector<CVec> states;
  std::vector<double> norms;  // ||e^{t G}|| at each sample
  std::shared_ptr<const ReducedSystem> system;  // set when evolved from a ReducedSystem
};

/// One matrix exponential of the step, then repeated propagation.
/// Throws Overflow for strongly unstable G over long horizons.
EvolutionTrace evolve(const CMat& G, const CVec& u0, double T, std::size_t steps);

/// Evolves a reduced system and tags the trace with it (block-ordered states).
EvolutionTrace evolve(std::shared_ptr<const ReducedSystem> system, const CVec& u0, double T,
                      std::size_t steps);

struct GrowthBound {
  double spectral_abscissa = 0.0;
  double transient_M = 1.0;  // sup over samples of ||e^{tG}|| e^{-epsilon t}
  double epsilon_used = 0.0;
};

/// Certified-on-samples exponential envelope ||e^{tG}|| <= M e^{epsilon t}.
/// margin <= 0 requests the default 1e-3 |abscissa| (or 1e-6 at abscissa 0).
/// Throws NonConvergedValidation if a 2x finer grid raises the sup by > 5%.
GrowthBound growth_bound(const CMat& G, double T_max, std::size_t samples, double margin = 0.0);

struct BoundednessReport {
  double observed_sup = 0.0;
  double final_decade_slope = 0.0;  // least-squares slope of log||e^{tG}|| vs log t
  bool bounded = false;
};

/// Samples ||e^{tG}|| on a log-spaced grid in (0, T_max]; bounded iff the sup
/// stays below `bound` and the final decade shows no growth trend.
BoundednessReport check_boundedness(const CMat& G, double T_max, double bound,
                                    std::size_t samples = 49);

struct SectorialityReport {
  double omega = 0.0;
  std::vector<double> thetas;     // radians
  std::vector<double> sup_norms;  // per-angle sup over radii of ||lambda R(lambda, G-omega)||
  std::size_t skipped_probes = 0;
  bool consistent_with_analytic = false;
};

/// Probes ||lambda R(lambda, G - omega I)|| along rays lambda = r e^{i theta}
/// (coarse log-spaced radii plus golden-section refinement around the peak).
/// Probe points that hit the spectrum are skipped and counted.
SectorialityReport check_analyticity(const CMat& G, double omega,
                                     const std::vector<double>& thetas_rad,
                                     const std::vector<double>& radii,
                                     double threshold = 1e3);

/// Default probe: angles {85, 88, 90} degrees, radii 1e-3..1e6 log-spaced.
SectorialityReport check_analyticity(const CMat& G, double omega, double threshold = 1e3);

/// Shift used by the pipeline when none is given: comfortably above the
/// abscissa so the probe measures the sector constant, not the gap to iR.
double default_analyticity_shift(const CMat& G);

/// C(t): solution of U'' = A U, U(0) = I, U'(0) = 0, via the first-order
/// exponential of [[0, I], [A, 0]].
CMat cosine_family(const CMat& A, double t);

/// || C(t+s) + C(t-s) - 2 C(t) C(s) ||.
double dalembert_check(const CMat& A, double t, double s);

/// Residual of the Wentzell-type boundary identity
///   L(Au + Cu') = B1 u + B2 u' + B3 Lu + B4 Lu'
/// on the trace state at the given index (t > 0), with L(A.) and L(C.)
/// evaluated by the problem's one-sided differential stencils.
double wentzell_residual(const DiscreteProblem& p, const EvolutionTrace& trace,
                         std::size_t index);

}  // namespace dynbc
