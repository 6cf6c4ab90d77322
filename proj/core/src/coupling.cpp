// Copyright (c) 2026 the dynbc authors
// SPDX-License-Identifier: Apache-2.0

#include "dynbc/coupling.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace dynbc {

KernelRestriction kernel_restriction(const CMat& A, const CMat& L) {
  const Eigen::Index N = A.rows();
  const Eigen::Index m = L.rows();
  if (A.cols() != N || L.cols() != N) {
    throw DimensionMismatch("kernel_restriction: shape mismatch");
  }
  KernelRestriction out;
  if (m == 0) {
    out.basis = CMat::Identity(N, N);
    out.A0 = A;
    return out;
  }
  Eigen::JacobiSVD<CMat> svd(L, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (!(sv(m - 1) > 1e-12 * std::max(1.0, sv(0)))) {
    throw RankDeficientL("kernel_restriction: L is rank deficient");
  }
  out.basis = svd.matrixV().rightCols(N - m);
  out.A0 = out.basis.adjoint() * A * out.basis;
  return out;
}

DirichletOperator dirichlet_operator(const DiscreteProblem& p, DirichletKind which,
                                     Complex lambda) {
  const CMat& op = which == DirichletKind::A_L ? p.A : p.C;
  const Eigen::Index N = p.dim_X;
  const Eigen::Index m = p.dim_dX;

  CMat S = -op;
  S.diagonal().array() += lambda;
  CMat rhs = CMat::Zero(N, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const Eigen::Index r = p.replaced_rows[static_cast<std::size_t>(k)];
    S.row(r) = p.L.row(k);
    rhs(r, k) = 1.0;
  }

  // Row equilibration keeps the trace rows from being swamped by the stiff
  // interior rows; one refinement pass then pins the residuals near eps.
  Eigen::VectorXd scale(N);
  for (Eigen::Index i = 0; i < N; ++i) {
    const double s = S.row(i).cwiseAbs().maxCoeff();
    scale(i) = s > 0.0 ? 1.0 / s : 1.0;
  }
  const CMat Ss = scale.asDiagonal() * S;
  const CMat rs = scale.asDiagonal() * rhs;
  Eigen::PartialPivLU<CMat> lu(Ss);
  if (lu.rcond() < 1e-12) {
    std::ostringstream os;
    os << "dirichlet_operator: lambda = " << lambda << " is in the spectrum (rcond "
       << lu.rcond() << ")";
    throw LambdaInSpectrum(os.str());
  }
  CMat D = lu.solve(rs);
  D += lu.solve(rs - Ss * D);

  DirichletOperator out;
  out.D = std::move(D);
  out.lambda = lambda;
  out.which = which;
  out.residual_trace = operator_norm(p.L * out.D - CMat::Identity(m, m));

  CMat E = op * out.D - lambda * out.D;
  for (Eigen::Index k = 0; k < m; ++k) {
    E.row(p.replaced_rows[static_cast<std::size_t>(k)]).setZero();
  }
  out.residual_interior = operator_norm(E);

  const double dnorm = operator_norm(out.D);
  if (out.residual_trace > 1e-9 || out.residual_interior > 1e-8 * std::max(1.0, dnorm)) {
    std::ostringstream os;
    os << "dirichlet_operator: residuals too large (trace " << out.residual_trace
       << ", interior " << out.residual_interior << "); lambda too close to the spectrum";
    throw LambdaInSpectrum(os.str());
  }
  return out;
}

const char* to_string(FormTag tag) {
  switch (tag) {
    case FormTag::G_form: return "G";
    case FormTag::G_underline: return "G_underline";
    case FormTag::H_form: return "H";
    case FormTag::H_underline: return "H_underline";
  }
  return "?";
}

const BlockRange& ReducedSystem::block(const std::string& name) const {
  for (const auto& b : block_map) {
    if (b.name == name) return b;
  }
  throw BlockMapMismatch("ReducedSystem: no block named '" + name + "'");
}

CVec ReducedSystem::ambient_state(const CVec& reduced) const {
  if (reduced.size() != G.rows()) {
    throw BlockMapMismatch("ambient_state: reduced state has wrong dimension");
  }
  return U_inv * (embedding * reduced);
}

CMat ambient_reduction(const DiscreteProblem& p) {
  const Eigen::Index N = p.dim_X;
  const Eigen::Index m = p.dim_dX;
  CMat M = CMat::Zero(2 * N + 2 * m, 2 * N + 2 * m);
  const Eigen::Index u0 = 0, x0 = N, v0 = N + m, y0 = 2 * N + m;
  M.block(u0, v0, N, N) = CMat::Identity(N, N);
  M.block(x0, y0, m, m) = CMat::Identity(m, m);
  M.block(v0, u0, N, N) = p.A;
  M.block(v0, v0, N, N) = p.C;
  M.block(y0, u0, m, N) = p.B1;
  M.block(y0, x0, m, m) = p.B3;
  M.block(y0, v0, m, N) = p.B2;
  M.block(y0, y0, m, m) = p.B4;
  return M;
}

namespace {

struct AssemblyParts {
  CMat D;
  CMat Wk;
  Eigen::Index N = 0;
  Eigen::Index m = 0;
  Eigen::Index n0 = 0;
};

AssemblyParts parts(const DiscreteProblem& p, DirichletKind which, Complex lambda) {
  AssemblyParts a;
  a.N = p.dim_X;
  a.m = p.dim_dX;
  a.n0 = a.N - a.m;
  a.D = dirichlet_operator(p, which, lambda).D;
  a.Wk = kernel_restriction(p.A, p.L).basis;
  return a;
}

// Ambient similarity pair for each form, acting on (u, x, v, y).
// G:  (u,x,v,y) -> (u - Dx, v, x, y)         (section-3 transform)
// Gu: (u,x,v,y) -> (u - Dx, v - Dy, x, y)    (section-4 / 5-bounded)
// H:  (u,x,v,y) -> (u, v - Dy, x, y)         (section-5 unbounded)
void ambient_similarity(FormTag tag, const CMat& D, Eigen::Index N, Eigen::Index m, CMat& U,
                        CMat& Ui) {
  const Eigen::Index dim = 2 * N + 2 * m;
  U = CMat::Zero(dim, dim);
  Ui = CMat::Zero(dim, dim);
  const Eigen::Index u0 = 0, x0 = N, v0 = N + m, y0 = 2 * N + m;
  const CMat I_N = CMat::Identity(N, N);
  const CMat I_m = CMat::Identity(m, m);
  // output rows: (first, second, third, fourth) coordinate of the transformed
  // side, sizes N, N, m, m
  const Eigen::Index o1 = 0, o2 = N, o3 = 2 * N, o4 = 2 * N + m;
  switch (tag) {
    case FormTag::G_form:
      U.block(o1, u0, N, N) = I_N;
      U.block(o1, x0, N, m) = -D;
      U.block(o2, v0, N, N) = I_N;
      U.block(o3, x0, m, m) = I_m;
      U.block(o4, y0, m, m) = I_m;
      Ui.block(u0, o1, N, N) = I_N;
      Ui.block(u0, o3, N, m) = D;
      Ui.block(x0, o3, m, m) = I_m;
      Ui.block(v0, o2, N, N) = I_N;
      Ui.block(y0, o4, m, m) = I_m;
      break;
    case FormTag::G_underline:
    case FormTag::H_underline:
      U.block(o1, u0, N, N) = I_N;
      U.block(o1, x0, N, m) = -D;
      U.block(o2, v0, N, N) = I_N;
      U.block(o2, y0, N, m) = -D;
      U.block(o3, x0, m, m) = I_m;
      U.block(o4, y0, m, m) = I_m;
      Ui.block(u0, o1, N, N) = I_N;
      Ui.block(u0, o3, N, m) = D;
      Ui.block(x0, o3, m, m) = I_m;
      Ui.block(v0, o2, N, N) = I_N;
      Ui.block(v0, o4, N, m) = D;
      Ui.block(y0, o4, m, m) = I_m;
      break;
    case FormTag::H_form:
      U.block(o1, u0, N, N) = I_N;
      U.block(o2, v0, N, N) = I_N;
      U.block(o2, y0, N, m) = -D;
      U.block(o3, x0, m, m) = I_m;
      U.block(o4, y0, m, m) = I_m;
      Ui.block(u0, o1, N, N) = I_N;
      Ui.block(x0, o3, m, m) = I_m;
      Ui.block(v0, o2, N, N) = I_N;
      Ui.block(v0, o4, N, m) = D;
      Ui.block(y0, o4, m, m) = I_m;
      break;
  }
}

CMat domain_embedding(FormTag tag, const CMat& Wk, Eigen::Index N, Eigen::Index m) {
  const Eigen::Index n0 = N - m;
  const bool first_kernel = tag != FormTag::H_form;
  const bool second_kernel = tag == FormTag::G_underline || tag == FormTag::H_underline;
  const Eigen::Index d1 = first_kernel ? n0 : N;
  const Eigen::Index d2 = second_kernel ? n0 : N;
  CMat W = CMat::Zero(2 * N + 2 * m, d1 + d2 + 2 * m);
  Eigen::Index r = 0, c = 0;
  if (first_kernel) W.block(r, c, N, n0) = Wk; else W.block(r, c, N, N) = CMat::Identity(N, N);
  r += N; c += d1;
  if (second_kernel) W.block(r, c, N, n0) = Wk; else W.block(r, c, N, N) = CMat::Identity(N, N);
  r += N; c += d2;
  W.block(r, c, m, m) = CMat::Identity(m, m);
  r += m; c += m;
  W.block(r, c, m, m) = CMat::Identity(m, m);
  return W;
}

std::vector<BlockRange> make_block_map(std::initializer_list<std::pair<const char*, Eigen::Index>> sizes) {
  std::vector<BlockRange> map;
  Eigen::Index at = 0;
  for (const auto& [name, sz] : sizes) {
    map.push_back(BlockRange{name, at, at + sz});
    at += sz;
  }
  return map;
}

ReducedSystem finish(const DiscreteProblem& p, FormTag tag, Complex lambda, AssemblyParts a,
                     CMat G, std::vector<BlockRange> map) {
  ReducedSystem r;
  r.G = std::move(G);
  r.block_map = std::move(map);
  ambient_similarity(tag, a.D, a.N, a.m, r.U, r.U_inv);
  r.lambda = lambda;
  r.form_tag = tag;
  r.D = std::move(a.D);
  r.kernel = std::move(a.Wk);
  r.embedding = domain_embedding(tag, r.kernel, a.N, a.m);
  r.dim_X = a.N;
  r.dim_dX = a.m;
  return r;
}

}  // namespace

ReducedSystem assemble_G(const DiscreteProblem& p, Complex lambda) {
  if (p.case_tag != CaseTag::unbounded_trace) {
    throw WrongCase("assemble_G requires case_tag unbounded_trace");
  }
  auto a = parts(p, DirichletKind::A_L, lambda);
  const Eigen::Index n0 = a.n0, N = a.N, m = a.m;
  const CMat WkH = a.Wk.adjoint();
  CMat G = CMat::Zero(n0 + N + 2 * m, n0 + N + 2 * m);
  // rows: (kernel of L) x X x dY x dX
  G.block(0, n0, n0, N) = WkH;
  G.block(0, n0 + N + m, n0, m) = -WkH * a.D;
  G.block(n0, 0, N, n0) = p.A * a.Wk;
  G.block(n0, n0, N, N) = p.C;
  G.block(n0, n0 + N, N, m) = p.A * a.D;
  G.block(n0 + N, n0 + N + m, m, m) = CMat::Identity(m, m);
  G.block(n0 + N + m, 0, m, n0) = p.B1 * a.Wk;
  G.block(n0 + N + m, n0, m, N) = p.B2;
  G.block(n0 + N + m, n0 + N, m, m) = p.B3 + p.B1 * a.D;
  G.block(n0 + N + m, n0 + N + m, m, m) = p.B4;
  return finish(p, FormTag::G_form, lambda, std::move(a), std::move(G),
                make_block_map({{"u", n0}, {"v", N}, {"w", m}, {"wdot", m}}));
}

ReducedSystem assemble_G_underline(const DiscreteProblem& p, Complex lambda) {
  if (p.case_tag != CaseTag::bounded_trace) {
    throw WrongCase("assemble_G_underline requires case_tag bounded_trace");
  }
  auto a = parts(p, DirichletKind::A_L, lambda);
  const Eigen::Index n0 = a.n0, m = a.m;
  const CMat WkH = a.Wk.adjoint();
  const CMat& D = a.D;
  CMat G = CMat::Zero(2 * n0 + 2 * m, 2 * n0 + 2 * m);
  G.block(0, n0, n0, n0) = CMat::Identity(n0, n0);
  G.block(n0, 0, n0, n0) = WkH * (p.A - D * p.B1) * a.Wk;
  G.block(n0, n0, n0, n0) = WkH * (p.C - D * p.B2) * a.Wk;
  G.block(n0, 2 * n0, n0, m) = WkH * (p.A * D - D * (p.B1 * D + p.B3));
  G.block(n0, 2 * n0 + m, n0, m) = WkH * (p.C * D - D * (p.B2 * D + p.B4));
  G.block(2 * n0, 2 * n0 + m, m, m) = CMat::Identity(m, m);
  G.block(2 * n0 + m, 0, m, n0) = p.B1 * a.Wk;
  G.block(2 * n0 + m, n0, m, n0) = p.B2 * a.Wk;
  G.block(2 * n0 + m, 2 * n0, m, m) = p.B3 + p.B1 * D;
  G.block(2 * n0 + m, 2 * n0 + m, m, m) = p.B4 + p.B2 * D;
  return finish(p, FormTag::G_underline, lambda, std::move(a), std::move(G),
                make_block_map({{"u", n0}, {"v", n0}, {"w", m}, {"wdot", m}}));
}

ReducedSystem assemble_H(const DiscreteProblem& p, Complex lambda) {
  if (p.case_tag != CaseTag::strong_damping_unbounded) {
    throw WrongCase("assemble_H requires case_tag strong_damping_unbounded");
  }
  auto a = parts(p, DirichletKind::C_L, lambda);
  const Eigen::Index n0 = a.n0, N = a.N, m = a.m;
  const CMat WkH = a.Wk.adjoint();
  const CMat& D = a.D;
  CMat H = CMat::Zero(N + n0 + 2 * m, N + n0 + 2 * m);
  // rows: X x (kernel of L) x dY x dX
  H.block(0, N, N, n0) = a.Wk;
  H.block(0, N + n0 + m, N, m) = D;
  H.block(N, 0, n0, N) = WkH * (p.A - D * p.B1);
  H.block(N, N, n0, n0) = WkH * (p.C - D * p.B2) * a.Wk;
  H.block(N, N + n0, n0, m) = -WkH * (D * p.B3);
  H.block(N, N + n0 + m, n0, m) = WkH * (p.C * D - D * (p.B2 * D + p.B4));
  H.block(N + n0, N + n0 + m, m, m) = CMat::Identity(m, m);
  H.block(N + n0 + m, 0, m, N) = p.B1;
  H.block(N + n0 + m, N, m, n0) = p.B2 * a.Wk;
  H.block(N + n0 + m, N + n0, m, m) = p.B3;
  H.block(N + n0 + m, N + n0 + m, m, m) = p.B4 + p.B2 * D;
  return finish(p, FormTag::H_form, lambda, std::move(a), std::move(H),
                make_block_map({{"u", N}, {"v", n0}, {"w", m}, {"wdot", m}}));
}

ReducedSystem assemble_H_underline(const DiscreteProblem& p, Complex lambda) {
  if (p.case_tag != CaseTag::strong_damping_bounded) {
    throw WrongCase("assemble_H_underline requires case_tag strong_damping_bounded");
  }
  auto a = parts(p, DirichletKind::C_L, lambda);
  const Eigen::Index n0 = a.n0, m = a.m;
  const CMat WkH = a.Wk.adjoint();
  const CMat& D = a.D;
  CMat H = CMat::Zero(2 * n0 + 2 * m, 2 * n0 + 2 * m);
  H.block(0, n0, n0, n0) = CMat::Identity(n0, n0);
  H.block(n0, 0, n0, n0) = WkH * (p.A - D * p.B1) * a.Wk;
  H.block(n0, n0, n0, n0) = WkH * (p.C - D * p.B2) * a.Wk;
  H.block(n0, 2 * n0, n0, m) = WkH * (p.A * D - D * (p.B1 * D + p.B3));
  H.block(n0, 2 * n0 + m, n0, m) = WkH * (p.C * D - D * (p.B2 * D + p.B4));
  H.block(2 * n0, 2 * n0 + m, m, m) = CMat::Identity(m, m);
  H.block(2 * n0 + m, 0, m, n0) = p.B1 * a.Wk;
  H.block(2 * n0 + m, n0, m, n0) = p.B2 * a.Wk;
  H.block(2 * n0 + m, 2 * n0, m, m) = p.B3 + p.B1 * D;
  H.block(2 * n0 + m, 2 * n0 + m, m, m) = p.B4 + p.B2 * D;
  return finish(p, FormTag::H_underline, lambda, std::move(a), std::move(H),
                make_block_map({{"u", n0}, {"v", n0}, {"w", m}, {"wdot", m}}));
}

ReducedSystem assemble(const DiscreteProblem& p, Complex lambda) {
  switch (p.case_tag) {
    case CaseTag::unbounded_trace: return assemble_G(p, lambda);
    case CaseTag::bounded_trace: return assemble_G_underline(p, lambda);
    case CaseTag::strong_damping_unbounded: return assemble_H(p, lambda);
    case CaseTag::strong_damping_bounded: return assemble_H_underline(p, lambda);
  }
  throw WrongCase("assemble: unknown case tag");
}

CMat assemble_A_constrained(const DiscreteProblem& p) {
  const Eigen::Index N = p.dim_X;
  const Eigen::Index m = p.dim_dX;
  if (m > 0) {
    Eigen::JacobiSVD<CMat> svd(p.L);
    if (!(svd.singularValues()(m - 1) > 1e-12 * std::max(1.0, svd.singularValues()(0)))) {
      throw RankDeficientL("assemble_A_constrained: L rank deficient");
    }
  }
  const bool ux = p.case_tag == CaseTag::unbounded_trace ||
                  p.case_tag == CaseTag::bounded_trace ||
                  p.case_tag == CaseTag::strong_damping_bounded;
  const bool vy = p.case_tag != CaseTag::unbounded_trace;
  const Eigen::Index cols = (ux ? N : N + m) + (vy ? N : N + m);
  CMat E = CMat::Zero(2 * N + 2 * m, cols);
  const Eigen::Index u0 = 0, x0 = N, v0 = N + m, y0 = 2 * N + m;
  Eigen::Index c = 0;
  if (ux) {
    for (Eigen::Index i = 0; i < N; ++i, ++c) {
      E(u0 + i, c) = 1.0;
      E.block(x0, c, m, 1) = p.L.col(i);
    }
  } else {
    for (Eigen::Index i = 0; i < N; ++i, ++c) E(u0 + i, c) = 1.0;
    for (Eigen::Index k = 0; k < m; ++k, ++c) E(x0 + k, c) = 1.0;
  }
  if (vy) {
    for (Eigen::Index i = 0; i < N; ++i, ++c) {
      E(v0 + i, c) = 1.0;
      E.block(y0, c, m, 1) = p.L.col(i);
    }
  } else {
    for (Eigen::Index i = 0; i < N; ++i, ++c) E(v0 + i, c) = 1.0;
    for (Eigen::Index k = 0; k < m; ++k, ++c) E(y0 + k, c) = 1.0;
  }
  Eigen::HouseholderQR<CMat> qr(E);
  const CMat Q = qr.householderQ() * CMat::Identity(E.rows(), E.cols());
  return Q.adjoint() * ambient_reduction(p) * Q;
}

Complex default_lambda(const DiscreteProblem& p) {
  const bool strong = p.case_tag == CaseTag::strong_damping_unbounded ||
                      p.case_tag == CaseTag::strong_damping_bounded;
  const auto kr = kernel_restriction(strong ? p.C : p.A, p.L);
  if (kr.A0.rows() == 0) return Complex(1.0, 0.0);
  const auto ev = eigenvalues(kr.A0);
  double absc = -std::numeric_limits<double>::infinity();
  for (Complex z : ev) absc = std::max(absc, z.real());
  double c = 1.0 + absc;
  for (int attempt = 0; attempt < 64; ++attempt) {
    double gap = std::numeric_limits<double>::infinity();
    for (Complex z : ev) gap = std::min(gap, std::abs(Complex(c, 0.0) - z));
    if (gap > 1e-9 * (1.0 + std::abs(c))) return Complex(c + gap / 2.0, 0.0);
    c += 1.0;
  }
  throw LambdaInSpectrum("default_lambda: could not find a resolvent point");
}

}  // namespace dynbc
