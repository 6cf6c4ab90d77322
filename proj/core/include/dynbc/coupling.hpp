// Copyright (c) 2026 the dynbc authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "dynbc/discretize.hpp"
#include "dynbc/matcore.hpp"

namespace dynbc {

/// Orthonormal basis of ker(L) together with the compression basis^H A basis.
struct KernelRestriction {
  CMat A0;
  CMat basis;  // dim_X x (dim_X - dim_dX), orthonormal columns spanning ker L
};

/// A0 := A restricted to ker(L), represented against an orthonormal kernel
/// basis. Throws RankDeficientL if L is not surjective.
KernelRestriction kernel_restriction(const CMat& A, const CMat& L);

enum class DirichletKind { A_L, C_L };

/// D_lambda: columns solve the boundary-value problem
///   (lambda I - A) d = 0   on the non-replaced rows,
///   L d = e_k              on the replaced rows,
/// so that L D = I and A D = lambda D on interior rows.
struct DirichletOperator {
  CMat D;
  Complex lambda;
  DirichletKind which = DirichletKind::A_L;
  double residual_interior = 0.0;  // ||Pi_int (A D - lambda D)||
  double residual_trace = 0.0;     // ||L D - I||
};

/// Throws LambdaInSpectrum when lambda is numerically in sigma(A0) (resp.
/// sigma(C0)), detected through the conditioning of the combined solve and
/// the right-inverse residuals.
DirichletOperator dirichlet_operator(const DiscreteProblem& p, DirichletKind which,
                                     Complex lambda);

enum class FormTag { G_form, G_underline, H_form, H_underline };

const char* to_string(FormTag tag);

struct BlockRange {
  std::string name;
  Eigen::Index begin = 0;
  Eigen::Index end = 0;  // half-open
  Eigen::Index size() const { return end - begin; }
};

/// An assembled reduced generator together with the similarity pair that
/// produced it. U and U_inv act on the ambient product (u, x, v, y) of
/// dimension 2 dim_X + 2 dim_dX; `embedding` holds the orthonormal basis of
/// the product-of-domains subspace on the transformed side, so that
///   G = embedding^H (U * ambient_reduction(P) * U_inv) * embedding.
struct ReducedSystem {
  CMat G;
  std::vector<BlockRange> block_map;
  CMat U;
  CMat U_inv;
  Complex lambda{};
  FormTag form_tag = FormTag::G_underline;
  CMat D;          // Dirichlet operator used in the assembly
  CMat kernel;     // orthonormal basis of ker L
  CMat embedding;  // (2N+2m) x dim(G)
  Eigen::Index dim_X = 0;
  Eigen::Index dim_dX = 0;

  const BlockRange& block(const std::string& name) const;

  /// Reconstructs the ambient coordinates (u, x, v, y) from a reduced state.
  CVec ambient_state(const CVec& reduced) const;
};

/// The first-order reduction matrix on the ambient product (u, x, v, y):
///   [ 0  0  I  0 ]
///   [ 0  0  0  I ]
///   [ A  0  C  0 ]
///   [ B1 B3 B2 B4 ]
CMat ambient_reduction(const DiscreteProblem& p);

/// Reduced forms. Each is the compression of U * ambient * U_inv onto the
/// product-of-domains subspace of its section; spectra agree with
/// assemble_A_constrained exactly when the problem's trace rows carry the
/// boundary dynamics (as the scenario builders guarantee).
ReducedSystem assemble_G(const DiscreteProblem& p, Complex lambda);
ReducedSystem assemble_G_underline(const DiscreteProblem& p, Complex lambda);
ReducedSystem assemble_H(const DiscreteProblem& p, Complex lambda);
ReducedSystem assemble_H_underline(const DiscreteProblem& p, Complex lambda);

/// Dispatches on p.case_tag.
ReducedSystem assemble(const DiscreteProblem& p, Complex lambda);

/// The constraint subspace appropriate to the case (Lu = x; Lu = x and
/// Lv = y; or Lv = y) as an orthonormal basis, and the compression of the
/// ambient reduction onto it.
CMat assemble_A_constrained(const DiscreteProblem& p);

/// lambda = 1 + spectral_abscissa(A0 or C0) + gap/2, stepped right until the
/// gap to the nearest eigenvalue is positive.
Complex default_lambda(const DiscreteProblem& p);

}  // namespace dynbc
