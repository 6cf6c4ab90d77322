// Copyright (c) 2026 the dynbc authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dynbc/matcore.hpp"

namespace dynbc {

/// Finite-difference weights for the m-th derivative at z from the given
/// nodes (Fornberg's recursion). Exact on polynomials up to degree
/// nodes.size()-1.
std::vector<double> fd_weights(double z, const std::vector<double>& nodes, int order);

/// Uniform grid on [0,1] with n_interior interior points, h = 1/(n_interior+1).
struct Grid1D {
  Eigen::Index n_interior = 0;
  double h = 0.0;

  explicit Grid1D(Eigen::Index n);
  Grid1D() = default;
};

/// Metric graph: E edges, each a unit interval with its own grid, glued at
/// V vertices. Edge e runs from incidence[e].first (x=0) to
/// incidence[e].second (x=1).
struct NetworkGraph {
  Eigen::Index n_edges = 0;
  Eigen::Index n_vertices = 0;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> incidence;
  std::vector<Grid1D> edge_grids;

  NetworkGraph(Eigen::Index V, std::vector<std::pair<Eigen::Index, Eigen::Index>> edges,
               std::vector<Grid1D> grids);
  bool connected() const;
};

enum class CaseTag {
  unbounded_trace,           // section-3 structure, D_lambda from A
  bounded_trace,             // section-4 structure, D_lambda from A
  strong_damping_unbounded,  // section-5 structure, D_lambda from C
  strong_damping_bounded,    // section-5 structure with bounded trace
};

const char* to_string(CaseTag tag);

/// Finite-dimensional instance of the second-order problem with dynamic
/// boundary conditions:
///
///   u''(t)  = A u(t) + C u'(t)          (interior rows)
///   w''(t)  = B1 u + B2 u' + B3 w + B4 w'   with  w = L u.
///
/// The rows of A and C listed in `replaced_rows` (the trace-carrying
/// coordinates) hold the boundary dynamics, so that L*A = B1 + B3*L and
/// L*C = B2 + B4*L for scenario-built problems; this makes the first-order
/// reduction a well-defined flow on the constraint set {x = Lu, y = Lv}.
/// Dirichlet solves replace exactly these rows by L.
struct DiscreteProblem {
  CMat A;
  CMat C;
  CMat L;
  CMat B1, B2, B3, B4;
  Eigen::Index dim_X = 0;
  Eigen::Index dim_dX = 0;
  Eigen::Index dim_dY = 0;
  CaseTag case_tag = CaseTag::bounded_trace;
  std::vector<Eigen::Index> replaced_rows;

  /// Trace-of-differential-expression evaluators for the Wentzell residual:
  /// row j approximates (A u)(boundary point j) resp. (C v)(j) by one-sided
  /// stencils. Defaults to L*A, L*C when no such evaluator is meaningful.
  CMat wentzell_LA;
  CMat wentzell_LC;

  std::string scenario;
  std::string description;

  void validate() const;
};

/// One-dimensional damped plate on [0,1]: u'' = -u'''' + u̇'' with the static
/// closure u''(t,j) = (-1)^j u'(t,j) - u(t,j) at both endpoints and dynamic
/// endpoint conditions
///   u''(t,j) [in t] = (-1)^{j+1} u'''(t,j) + (-1)^j u'(t,j)
///                     + (-1)^j u̇'(t,j) - u(t,j) - u̇(t,j).
/// State: n interior samples plus the two endpoint samples.
DiscreteProblem build_interval_plate(Eigen::Index n);

/// Wave equation on a metric graph: u_e'' = u_e'' (edgewise), continuity at
/// vertices, vertex dynamics d'' = P Phi (normal derivatives) + M d + N d'.
/// Vertex values are shared degrees of freedom; L selects them.
DiscreteProblem build_network_wave(const NetworkGraph& graph, const CMat& M, const CMat& N,
                                   const CMat& P, const CMat& Phi);

/// Strongly damped interval: u'' = alpha u'' + u̇'' on (0,1), u(t,0) = 0,
/// dynamic condition at x=1:
///   u''(t,1) = -beta1 u'(t,1) - beta2 u̇'(t,1) + beta3 u(t,1) + beta4 u̇(t,1).
DiscreteProblem build_strongly_damped_interval(Complex alpha,
                                               const std::array<Complex, 4>& beta,
                                               Eigen::Index n);

/// Validates and completes a user-specified problem. L must have full row
/// rank (RankDeficientL otherwise); replaced rows are chosen by greedy
/// maximal-pivot selection on L when not supplied.
DiscreteProblem build_custom(DiscreteProblem p);

}  // namespace dynbc
