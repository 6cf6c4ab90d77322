// Copyright (c) 2026 the dynbc authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dynbc/coupling.hpp"
#include "dynbc/matcore.hpp"
#include "dynbc/semigroup.hpp"

namespace dynbc {

/// Exponential-envelope constants per block, ||e^{tH}|| <= M1 e^{eps1 t} and
/// ||e^{tLb}|| <= M2 e^{eps2 t}.
struct BlockBounds {
  double M1 = 1.0;
  double eps1 = 0.0;
  double M2 = 1.0;
  double eps2 = 0.0;
};

/// The 2x2 operator matrix [[H, J], [K, Lb]]. The lower-right block is named
/// Lb to keep L for the boundary trace operator.
struct BlockSystem2x2 {
  CMat H;
  CMat J;
  CMat K;
  CMat Lb;
  std::optional<BlockBounds> bounds;

  Eigen::Index p() const { return H.rows(); }
  Eigen::Index q() const { return Lb.rows(); }
  CMat assembled() const;
  void validate() const;
};

/// Splits a reduced generator at the named block boundary (the cut is after
/// the block with that name; "v" separates interior from boundary dynamics).
BlockSystem2x2 split_blocks(const ReducedSystem& r, const std::string& cut = "v");

/// Fills sys.bounds from growth_bound on both diagonal blocks.
BlockSystem2x2 with_growth_bounds(BlockSystem2x2 sys, double T_max, std::size_t samples = 64);

/// Terms S_0..S_kmax of the Dyson-Phillips expansion of e^{t calH}, with the
/// 2x2 block partition recorded, plus the partial-sum error at the final time.
struct DysonPhillipsExpansion {
  std::vector<SampledMatrixFunction> terms;
  Eigen::Index p = 0;
  Eigen::Index q = 0;
  double partial_sum_error = 0.0;

  CMat partial_sum(std::size_t grid_index) const;
};

/// S_0(t) = diag(e^{tH}, e^{tLb}); S_k = S_0 * offdiag(J, K) * S_{k-1} via
/// blockwise trapezoid convolution on a uniform grid with steps+1 points.
DysonPhillipsExpansion dyson_phillips(const BlockSystem2x2& sys, double T, std::size_t steps,
                                      std::size_t k_max);

struct ZeroPatternReport {
  double max_violation = 0.0;
  bool pass = false;
};

/// Checks S_{2n}^{(12)} = S_{2n}^{(21)} = S_{2n+1}^{(11)} = S_{2n+1}^{(22)} = 0
/// on the whole grid.
ZeroPatternReport verify_zero_pattern(const DysonPhillipsExpansion& exp);

struct L1Estimate {
  std::size_t n = 0;       // induction index
  int which = 1;           // 1..4, matching the four estimates
  double lhs = 0.0;        // integral_0^T ||S_k(.) z|| dt
  double rhs = 0.0;        // M^n * (envelope constant)
  bool pass = false;
};

struct L1Report {
  std::vector<L1Estimate> entries;
  bool all_pass = false;
};

/// Verifies the four L^1 estimates for every n with 2n+1 <= k_max and every
/// probe vector, with 1% quadrature slack. Requires bounds with negative
/// rates and a grid long enough that e^{eps T} <= 1e-6.
L1Report verify_l1_estimates(const BlockSystem2x2& sys, const DysonPhillipsExpansion& exp,
                             const std::vector<CVec>& probes_E,
                             const std::vector<CVec>& probes_F);

enum class StabilityVerdict { uniformly_exponentially_stable, inconclusive };

struct StabilityCertificate {
  double M = 0.0;   // M1 M2 ||J|| ||K|| / (eps1 eps2)
  double M0 = 0.0;  // M1/|eps1| + M2/|eps2| + M1 M2 (||J|| + ||K||) / (eps1 eps2)
  StabilityVerdict verdict = StabilityVerdict::inconclusive;
  double spectral_abscissa = 0.0;
  bool integral_bound_ok = false;  // int_0^T ||e^{t calH} z|| dt <= M0/(1-M) ||z||
};

/// The smallness criterion M < 1; when it certifies stability the evidence
/// cross-checks the abscissa and the Datko-type integral bound on probe
/// vectors (deterministically seeded when none are given).
StabilityCertificate smallness_criterion(const BlockSystem2x2& sys,
                                         std::vector<CVec> probes = {});

struct CoupledBoundednessReport {
  bool premise_ok = false;  // eps1 < 0 or eps2 < 0
  BoundednessReport boundedness;
  double series_termination_violation = 0.0;  // max ||S_k||, k >= 2 (must vanish for J = 0)
};

/// Boundedness of e^{t calH} when J = 0 and one diagonal block decays;
/// also exercises the termination S_k = 0, k >= 2, of the series.
CoupledBoundednessReport coupled_boundedness(const BlockSystem2x2& sys, double T_max = 1e3);

struct DisjointnessReport {
  std::vector<Complex> near_imag_H;
  std::vector<Complex> near_imag_Lb;
  double min_cross_distance = std::numeric_limits<double>::infinity();
  bool disjoint = false;
};

/// sigma(H) and sigma(Lb) have no common purely imaginary values within tol.
DisjointnessReport spectral_disjointness(const BlockSystem2x2& sys, double tol);

}  // namespace dynbc
