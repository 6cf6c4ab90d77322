// Copyright (c) 2026 the dynbc authors
// SPDX-License-Identifier: Apache-2.0

#include "dynbc/discretize.hpp"

#include <Eigen/SVD>
#include <array>
#include <cmath>
#include <queue>
#include <set>
#include <sstream>

namespace dynbc {

std::vector<double> fd_weights(double z, const std::vector<double>& nodes, int order) {
  const int n = static_cast<int>(nodes.size());
  if (n < order + 1) throw InvalidSize("fd_weights: need at least order+1 nodes");
  std::vector<std::vector<double>> c(n, std::vector<double>(order + 1, 0.0));
  double c1 = 1.0;
  double c4 = nodes[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        }
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) {
        c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      }
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = c[i][order];
  return w;
}

Grid1D::Grid1D(Eigen::Index n) : n_interior(n), h(1.0 / static_cast<double>(n + 1)) {
  if (n < 4) throw InvalidSize("Grid1D: n_interior must be >= 4");
}

NetworkGraph::NetworkGraph(Eigen::Index V,
                           std::vector<std::pair<Eigen::Index, Eigen::Index>> edges,
                           std::vector<Grid1D> grids)
    : n_edges(static_cast<Eigen::Index>(edges.size())),
      n_vertices(V),
      incidence(std::move(edges)),
      edge_grids(std::move(grids)) {
  if (edge_grids.size() != incidence.size()) {
    throw DimensionMismatch("NetworkGraph: one grid per edge required");
  }
  for (const auto& [a, b] : incidence) {
    if (a < 0 || a >= V || b < 0 || b >= V) {
      throw DimensionMismatch("NetworkGraph: vertex index out of range");
    }
  }
  if (!connected()) throw DisconnectedGraph("NetworkGraph: graph is not connected");
}

bool NetworkGraph::connected() const {
  if (n_vertices == 0) return false;
  std::vector<std::vector<Eigen::Index>> adj(static_cast<std::size_t>(n_vertices));
  for (const auto& [a, b] : incidence) {
    adj[static_cast<std::size_t>(a)].push_back(b);
    adj[static_cast<std::size_t>(b)].push_back(a);
  }
  std::vector<bool> seen(static_cast<std::size_t>(n_vertices), false);
  std::queue<Eigen::Index> q;
  q.push(0);
  seen[0] = true;
  Eigen::Index count = 1;
  while (!q.empty()) {
    const Eigen::Index v = q.front();
    q.pop();
    for (Eigen::Index w : adj[static_cast<std::size_t>(v)]) {
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = true;
        ++count;
        q.push(w);
      }
    }
  }
  return count == n_vertices;
}

const char* to_string(CaseTag tag) {
  switch (tag) {
    case CaseTag::unbounded_trace: return "unbounded_trace";
    case CaseTag::bounded_trace: return "bounded_trace";
    case CaseTag::strong_damping_unbounded: return "strong_damping_unbounded";
    case CaseTag::strong_damping_bounded: return "strong_damping_bounded";
  }
  return "?";
}

void DiscreteProblem::validate() const {
  const Eigen::Index N = dim_X;
  const Eigen::Index m = dim_dX;
  auto check = [](bool ok, const char* msg) {
    if (!ok) throw DimensionMismatch(msg);
  };
  check(A.rows() == N && A.cols() == N, "DiscreteProblem: A must be dim_X x dim_X");
  check(C.rows() == N && C.cols() == N, "DiscreteProblem: C must be dim_X x dim_X");
  check(L.rows() == m && L.cols() == N, "DiscreteProblem: L must be dim_dX x dim_X");
  check(B1.rows() == m && B1.cols() == N, "DiscreteProblem: B1 must be dim_dX x dim_X");
  check(B2.rows() == m && B2.cols() == N, "DiscreteProblem: B2 must be dim_dX x dim_X");
  check(B3.rows() == m && B3.cols() == m, "DiscreteProblem: B3 must be dim_dX x dim_dX");
  check(B4.rows() == m && B4.cols() == m, "DiscreteProblem: B4 must be dim_dX x dim_dX");
  check(dim_dY == dim_dX, "DiscreteProblem: dim_dY must equal dim_dX (identity embedding)");
  for (const CMat* M : {&A, &C, &L, &B1, &B2, &B3, &B4}) require_finite(*M);
  if (m > 0) {
    Eigen::JacobiSVD<CMat> svd(L);
    const double smin = svd.singularValues()(m - 1);
    const double smax = svd.singularValues()(0);
    if (!(smin > 1e-12 * std::max(1.0, smax))) {
      throw RankDeficientL("DiscreteProblem: L is not surjective (rank-deficient)");
    }
  }
  if (static_cast<Eigen::Index>(replaced_rows.size()) != m) {
    throw DimensionMismatch("DiscreteProblem: need one replaced row per trace row");
  }
  std::set<Eigen::Index> uniq(replaced_rows.begin(), replaced_rows.end());
  check(static_cast<Eigen::Index>(uniq.size()) == m && (m == 0 || (*uniq.begin() >= 0 && *uniq.rbegin() < N)),
        "DiscreteProblem: replaced rows must be distinct and in range");
}

namespace {

// Adds w * coeff into row, nodes indexed from the given side.
void add_stencil(CMat& M, Eigen::Index row, Eigen::Index first_col, const std::vector<double>& w,
                 Complex coeff) {
  for (std::size_t k = 0; k < w.size(); ++k) {
    M(row, first_col + static_cast<Eigen::Index>(k)) += coeff * w[k];
  }
}

std::vector<double> grid_nodes(double x0, double h, Eigen::Index count) {
  std::vector<double> xs(static_cast<std::size_t>(count));
  for (Eigen::Index i = 0; i < count; ++i) xs[static_cast<std::size_t>(i)] = x0 + h * static_cast<double>(i);
  return xs;
}

}  // namespace

DiscreteProblem build_interval_plate(Eigen::Index n) {
  if (n < 8) throw InvalidSize("build_interval_plate: n must be >= 8");
  const Eigen::Index N = n + 2;  // endpoint samples are part of the state
  const double h = 1.0 / static_cast<double>(n + 1);

  DiscreteProblem p;
  p.dim_X = N;
  p.dim_dX = p.dim_dY = 2;
  p.case_tag = CaseTag::bounded_trace;
  p.scenario = "interval_plate";
  {
    std::ostringstream os;
    os << "damped plate on [0,1], n=" << n << ", h=" << h;
    p.description = os.str();
  }

  p.A = CMat::Zero(N, N);
  p.C = CMat::Zero(N, N);
  p.L = CMat::Zero(2, N);
  p.L(0, 0) = 1.0;
  p.L(1, N - 1) = 1.0;
  p.replaced_rows = {0, N - 1};

  const double h2 = h * h;
  const double h4 = h2 * h2;
  for (Eigen::Index i = 1; i <= n; ++i) {
    p.C(i, i - 1) += 1.0 / h2;
    p.C(i, i) += -2.0 / h2;
    p.C(i, i + 1) += 1.0 / h2;
  }

  // Ghost elimination via the static closure u''(j) = (-1)^j u'(j) - u(j),
  // discretized centrally at the endpoint:
  //   left:  (u_{-1} - 2u_0 + u_1)/h^2 =  (u_1 - u_{-1})/(2h) - u_0
  //   right: (u_n - 2u_{n+1} + u_{n+2})/h^2 = -(u_{n+2} - u_n)/(2h) - u_{n+1}
  const double den = 1.0 / h2 + 1.0 / (2.0 * h);
  const double g_near = (1.0 / (2.0 * h) - 1.0 / h2) / den;  // weight of the first interior sample
  const double g_bdry = (2.0 / h2 - 1.0) / den;              // weight of the endpoint sample
  for (Eigen::Index i = 1; i <= n; ++i) {
    const std::array<std::pair<Eigen::Index, double>, 5> st{{{i - 2, 1.0},
                                                             {i - 1, -4.0},
                                                             {i, 6.0},
                                                             {i + 1, -4.0},
                                                             {i + 2, 1.0}}};
    for (const auto& [k, w] : st) {
      if (k == -1) {
        p.A(i, 1) += -w * g_near / h4;
        p.A(i, 0) += -w * g_bdry / h4;
      } else if (k == N) {
        p.A(i, N - 2) += -w * g_near / h4;
        p.A(i, N - 1) += -w * g_bdry / h4;
      } else {
        p.A(i, k) += -w / h4;
      }
    }
  }

  // Endpoint force operators, (-1)^{j+1} u''' + (-1)^j u' and (-1)^j v'.
  p.B1 = CMat::Zero(2, N);
  p.B2 = CMat::Zero(2, N);
  const auto xsL1 = grid_nodes(0.0, h, 5);
  const auto xsL3 = grid_nodes(0.0, h, 7);
  const auto w1l = fd_weights(0.0, xsL1, 1);
  const auto w3l = fd_weights(0.0, xsL3, 3);
  const auto xsR1 = grid_nodes(1.0 - 4.0 * h, h, 5);
  const auto xsR3 = grid_nodes(1.0 - 6.0 * h, h, 7);
  const auto w1r = fd_weights(1.0, xsR1, 1);
  const auto w3r = fd_weights(1.0, xsR3, 3);
  add_stencil(p.B1, 0, 0, w1l, 1.0);        // + u'(0)
  add_stencil(p.B1, 0, 0, w3l, -1.0);       // - u'''(0)
  add_stencil(p.B1, 1, N - 5, w1r, -1.0);   // - u'(1)
  add_stencil(p.B1, 1, N - 7, w3r, 1.0);    // + u'''(1)
  add_stencil(p.B2, 0, 0, w1l, 1.0);        // + v'(0)
  add_stencil(p.B2, 1, N - 5, w1r, -1.0);   // - v'(1)
  p.B3 = -CMat::Identity(2, 2);
  p.B4 = -CMat::Identity(2, 2);

  p.A.row(0) = p.B1.row(0) + (p.B3 * p.L).row(0);
  p.A.row(N - 1) = p.B1.row(1) + (p.B3 * p.L).row(1);
  p.C.row(0) = p.B2.row(0) + (p.B4 * p.L).row(0);
  p.C.row(N - 1) = p.B2.row(1) + (p.B4 * p.L).row(1);

  // Wentzell evaluators: -u'''' and v'' at the endpoints, one-sided.
  p.wentzell_LA = CMat::Zero(2, N);
  p.wentzell_LC = CMat::Zero(2, N);
  const auto w4l = fd_weights(0.0, grid_nodes(0.0, h, 8), 4);
  const auto w4r = fd_weights(1.0, grid_nodes(1.0 - 7.0 * h, h, 8), 4);
  const auto w2l = fd_weights(0.0, grid_nodes(0.0, h, 6), 2);
  const auto w2r = fd_weights(1.0, grid_nodes(1.0 - 5.0 * h, h, 6), 2);
  add_stencil(p.wentzell_LA, 0, 0, w4l, -1.0);
  add_stencil(p.wentzell_LA, 1, N - 8, w4r, -1.0);
  add_stencil(p.wentzell_LC, 0, 0, w2l, 1.0);
  add_stencil(p.wentzell_LC, 1, N - 6, w2r, 1.0);

  p.validate();
  return p;
}

DiscreteProblem build_network_wave(const NetworkGraph& graph, const CMat& M, const CMat& N,
                                   const CMat& P, const CMat& Phi) {
  const Eigen::Index E = graph.n_edges;
  const Eigen::Index V = graph.n_vertices;
  if (M.rows() != V || M.cols() != V || N.rows() != V || N.cols() != V || P.rows() != V ||
      P.cols() != V) {
    throw DimensionMismatch("build_network_wave: M, N, P must be V x V");
  }
  if (Phi.rows() != V || Phi.cols() != E) {
    throw DimensionMismatch("build_network_wave: Phi must be V x E");
  }

  Eigen::Index n_int = 0;
  std::vector<Eigen::Index> offset(static_cast<std::size_t>(E));
  for (Eigen::Index e = 0; e < E; ++e) {
    offset[static_cast<std::size_t>(e)] = n_int;
    n_int += graph.edge_grids[static_cast<std::size_t>(e)].n_interior;
  }
  const Eigen::Index dimX = n_int + V;  // shared vertex values close the coupling
  const auto vdof = [&](Eigen::Index v) { return n_int + v; };

  DiscreteProblem p;
  p.dim_X = dimX;
  p.dim_dX = p.dim_dY = V;
  p.case_tag = CaseTag::bounded_trace;
  p.scenario = "network_wave";
  {
    std::ostringstream os;
    os << "wave on a metric graph, E=" << E << ", V=" << V;
    p.description = os.str();
  }

  p.A = CMat::Zero(dimX, dimX);
  p.C = CMat::Zero(dimX, dimX);
  p.L = CMat::Zero(V, dimX);
  for (Eigen::Index v = 0; v < V; ++v) p.L(v, vdof(v)) = 1.0;
  p.replaced_rows.resize(static_cast<std::size_t>(V));
  for (Eigen::Index v = 0; v < V; ++v) p.replaced_rows[static_cast<std::size_t>(v)] = vdof(v);

  CMat nd = CMat::Zero(V, dimX);  // weighted normal-derivative extraction, rows indexed by vertex
  for (Eigen::Index e = 0; e < E; ++e) {
    const auto [a, b] = graph.incidence[static_cast<std::size_t>(e)];
    const Grid1D& g = graph.edge_grids[static_cast<std::size_t>(e)];
    const Eigen::Index ne = g.n_interior;
    const double h = g.h;
    const Eigen::Index off = offset[static_cast<std::size_t>(e)];
    const double h2 = h * h;
    for (Eigen::Index i = 0; i < ne; ++i) {
      const Eigen::Index row = off + i;
      p.A(row, i == 0 ? vdof(a) : off + i - 1) += 1.0 / h2;
      p.A(row, off + i) += -2.0 / h2;
      p.A(row, i == ne - 1 ? vdof(b) : off + i + 1) += 1.0 / h2;
    }
    // outward normal derivative: -u'(0) at the start vertex, +u'(1) at the end
    const auto wl = fd_weights(0.0, grid_nodes(0.0, h, 3), 1);
    const auto wr = fd_weights(1.0, grid_nodes(1.0 - 2.0 * h, h, 3), 1);
    nd(a, vdof(a)) += Phi(a, e) * (-wl[0]);
    nd(a, off + 0) += Phi(a, e) * (-wl[1]);
    nd(a, off + 1) += Phi(a, e) * (-wl[2]);
    nd(b, off + ne - 2) += Phi(b, e) * wr[0];
    nd(b, off + ne - 1) += Phi(b, e) * wr[1];
    nd(b, vdof(b)) += Phi(b, e) * wr[2];
  }

  p.B1 = P * nd;
  p.B2 = CMat::Zero(V, dimX);
  p.B3 = M;
  p.B4 = N;

  for (Eigen::Index v = 0; v < V; ++v) {
    p.A.row(vdof(v)) = p.B1.row(v) + (p.B3 * p.L).row(v);
    p.C.row(vdof(v)) = p.B2.row(v) + (p.B4 * p.L).row(v);
  }

  p.wentzell_LA = p.L * p.A;
  p.wentzell_LC = p.L * p.C;
  p.validate();
  return p;
}

DiscreteProblem build_strongly_damped_interval(Complex alpha, const std::array<Complex, 4>& beta,
                                               Eigen::Index n) {
  if (n < 4) throw InvalidSize("build_strongly_damped_interval: n must be >= 4");
  const Eigen::Index N = n + 1;  // interior samples and the x=1 endpoint; u(0)=0 eliminated
  const double h = 1.0 / static_cast<double>(n + 1);
  const double h2 = h * h;

  DiscreteProblem p;
  p.dim_X = N;
  p.dim_dX = p.dim_dY = 1;
  p.case_tag = CaseTag::strong_damping_bounded;
  p.scenario = "strongly_damped_interval";
  {
    std::ostringstream os;
    os << "strongly damped interval, alpha=" << alpha.real() << "+" << alpha.imag()
       << "i, n=" << n;
    p.description = os.str();
  }

  CMat d2 = CMat::Zero(N, N);
  for (Eigen::Index i = 0; i < n; ++i) {  // rows for x_1..x_n; left Dirichlet value dropped
    if (i > 0) d2(i, i - 1) += 1.0 / h2;
    d2(i, i) += -2.0 / h2;
    d2(i, i + 1) += 1.0 / h2;
  }
  p.A = alpha * d2;
  p.C = d2;
  p.L = CMat::Zero(1, N);
  p.L(0, N - 1) = 1.0;
  p.replaced_rows = {N - 1};

  // -beta u'(1), one-sided (7-point; the Wentzell identity check wants
  // stencil error well below the h^2 interior truncation)
  const auto w1 = fd_weights(1.0, grid_nodes(1.0 - 6.0 * h, h, 7), 1);
  p.B1 = CMat::Zero(1, N);
  p.B2 = CMat::Zero(1, N);
  add_stencil(p.B1, 0, N - 7, w1, -beta[0]);
  add_stencil(p.B2, 0, N - 7, w1, -beta[1]);
  p.B3 = CMat::Constant(1, 1, beta[2]);
  p.B4 = CMat::Constant(1, 1, beta[3]);

  p.A.row(N - 1) = p.B1.row(0) + (p.B3 * p.L).row(0);
  p.C.row(N - 1) = p.B2.row(0) + (p.B4 * p.L).row(0);

  const auto w2 = fd_weights(1.0, grid_nodes(1.0 - 7.0 * h, h, 8), 2);
  p.wentzell_LA = CMat::Zero(1, N);
  p.wentzell_LC = CMat::Zero(1, N);
  add_stencil(p.wentzell_LA, 0, N - 8, w2, alpha);
  add_stencil(p.wentzell_LC, 0, N - 8, w2, 1.0);

  p.validate();
  return p;
}

DiscreteProblem build_custom(DiscreteProblem p) {
  p.dim_X = p.A.rows();
  p.dim_dX = p.L.rows();
  if (p.dim_dY == 0 || p.dim_dY != p.dim_dX) p.dim_dY = p.dim_dX;
  if (p.scenario.empty()) p.scenario = "custom";
  if (p.replaced_rows.empty() && p.dim_dX > 0) {
    // greedy maximal-pivot selection on L
    CMat R = p.L;
    std::set<Eigen::Index> chosen;
    for (Eigen::Index k = 0; k < p.dim_dX; ++k) {
      Eigen::Index bi = -1, bj = -1;
      double best = -1.0;
      for (Eigen::Index i = 0; i < R.rows(); ++i) {
        for (Eigen::Index j = 0; j < R.cols(); ++j) {
          if (chosen.count(j)) continue;
          const double v = std::abs(R(i, j));
          if (v > best) {
            best = v;
            bi = i;
            bj = j;
          }
        }
      }
      if (best <= 0.0) throw RankDeficientL("build_custom: L is not surjective");
      chosen.insert(bj);
      // eliminate column bj from the remaining rows
      for (Eigen::Index i = 0; i < R.rows(); ++i) {
        if (i == bi) continue;
        R.row(i) -= (R(i, bj) / R(bi, bj)) * R.row(bi);
      }
      R.row(bi).setZero();
    }
    p.replaced_rows.assign(chosen.begin(), chosen.end());
  }
  if (p.wentzell_LA.size() == 0) p.wentzell_LA = p.L * p.A;
  if (p.wentzell_LC.size() == 0) p.wentzell_LC = p.L * p.C;
  p.validate();
  return p;
}

}  // namespace dynbc
