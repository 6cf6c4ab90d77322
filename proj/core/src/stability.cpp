// Copyright (c) 2026 the dynbc authors
// SPDX-License-Identifier: Apache-2.0

#include "dynbc/stability.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace dynbc {

CMat BlockSystem2x2::assembled() const {
  CMat M = CMat::Zero(p() + q(), p() + q());
  M.block(0, 0, p(), p()) = H;
  M.block(0, p(), p(), q()) = J;
  M.block(p(), 0, q(), p()) = K;
  M.block(p(), p(), q(), q()) = Lb;
  return M;
}

void BlockSystem2x2::validate() const {
  if (H.rows() != H.cols() || Lb.rows() != Lb.cols() || J.rows() != H.rows() ||
      J.cols() != Lb.rows() || K.rows() != Lb.rows() || K.cols() != H.rows()) {
    throw DimensionMismatch("BlockSystem2x2: inconsistent block shapes");
  }
  if (bounds) {
    if (!(bounds->M1 >= 1.0) || !(bounds->M2 >= 1.0) || !(bounds->eps1 <= 0.0) ||
        !(bounds->eps2 <= 0.0)) {
      throw BoundsMissing("BlockSystem2x2: bounds must satisfy M >= 1, eps <= 0");
    }
  }
}

BlockSystem2x2 split_blocks(const ReducedSystem& r, const std::string& cut) {
  Eigen::Index at = -1;
  for (const auto& b : r.block_map) {
    if (b.name == cut) {
      at = b.end;
      break;
    }
  }
  if (at < 0) throw UnknownCut("split_blocks: no block named '" + cut + "'");
  const Eigen::Index n = r.G.rows();
  BlockSystem2x2 sys;
  sys.H = r.G.block(0, 0, at, at);
  sys.J = r.G.block(0, at, at, n - at);
  sys.K = r.G.block(at, 0, n - at, at);
  sys.Lb = r.G.block(at, at, n - at, n - at);
  sys.validate();
  return sys;
}

BlockSystem2x2 with_growth_bounds(BlockSystem2x2 sys, double T_max, std::size_t samples) {
  BlockBounds b;
  if (sys.p() > 0) {
    const GrowthBound g = growth_bound(sys.H, T_max, samples);
    b.M1 = g.transient_M;
    b.eps1 = g.epsilon_used;
  }
  if (sys.q() > 0) {
    const GrowthBound g = growth_bound(sys.Lb, T_max, samples);
    b.M2 = g.transient_M;
    b.eps2 = g.epsilon_used;
  }
  sys.bounds = b;
  sys.validate();
  return sys;
}

CMat DysonPhillipsExpansion::partial_sum(std::size_t grid_index) const {
  CMat S = CMat::Zero(p + q, p + q);
  for (const auto& t : terms) S += t.samples[grid_index];
  return S;
}

DysonPhillipsExpansion dyson_phillips(const BlockSystem2x2& sys, double T, std::size_t steps,
                                      std::size_t k_max) {
  sys.validate();
  const Eigen::Index p = sys.p();
  const Eigen::Index q = sys.q();
  const auto grid = SampledMatrixFunction::uniform_grid(T, steps);
  const double h = T / static_cast<double>(steps);

  std::vector<CMat> eH(steps + 1), eL(steps + 1);
  {
    const CMat Eh = matrix_exponential(sys.H, h);
    const CMat El = matrix_exponential(sys.Lb, h);
    eH[0] = CMat::Identity(p, p);
    eL[0] = CMat::Identity(q, q);
    for (std::size_t i = 1; i <= steps; ++i) {
      eH[i] = Eh * eH[i - 1];
      eL[i] = El * eL[i - 1];
    }
  }
  const SampledMatrixFunction eHf(grid, eH);
  const SampledMatrixFunction eLf(grid, eL);

  // per-term block storage: [0]=11, [1]=12, [2]=21, [3]=22
  struct Blocks {
    SampledMatrixFunction b11, b12, b21, b22;
  };
  auto zeros = [&](Eigen::Index r, Eigen::Index c) {
    return SampledMatrixFunction(grid, std::vector<CMat>(steps + 1, CMat::Zero(r, c)));
  };

  std::vector<Blocks> blocks;
  blocks.push_back(Blocks{eHf, zeros(p, q), zeros(q, p), eLf});
  auto apply = [&](const CMat& M, const SampledMatrixFunction& f) {
    std::vector<CMat> out(f.samples.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = M * f.samples[i];
    return SampledMatrixFunction(f.time_grid, std::move(out));
  };
  for (std::size_t k = 1; k <= k_max; ++k) {
    const Blocks& prev = blocks.back();
    Blocks next{convolve(eHf, apply(sys.J, prev.b21)), convolve(eHf, apply(sys.J, prev.b22)),
                convolve(eLf, apply(sys.K, prev.b11)), convolve(eLf, apply(sys.K, prev.b12))};
    blocks.push_back(std::move(next));
  }

  DysonPhillipsExpansion exp;
  exp.p = p;
  exp.q = q;
  for (const auto& b : blocks) {
    std::vector<CMat> full(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i) {
      CMat M = CMat::Zero(p + q, p + q);
      M.block(0, 0, p, p) = b.b11.samples[i];
      M.block(0, p, p, q) = b.b12.samples[i];
      M.block(p, 0, q, p) = b.b21.samples[i];
      M.block(p, p, q, q) = b.b22.samples[i];
      full[i] = std::move(M);
    }
    exp.terms.emplace_back(grid, std::move(full));
  }
  exp.partial_sum_error =
      operator_norm(exp.partial_sum(steps) - matrix_exponential(sys.assembled(), T));
  return exp;
}

ZeroPatternReport verify_zero_pattern(const DysonPhillipsExpansion& exp) {
  ZeroPatternReport rep;
  const Eigen::Index p = exp.p;
  const Eigen::Index q = exp.q;
  for (std::size_t k = 0; k < exp.terms.size(); ++k) {
    for (const CMat& S : exp.terms[k].samples) {
      double v = 0.0;
      if (k % 2 == 0) {
        if (p > 0 && q > 0) {
          v = std::max(S.block(0, p, p, q).cwiseAbs().maxCoeff(),
                       S.block(p, 0, q, p).cwiseAbs().maxCoeff());
        }
      } else {
        const double v11 = p > 0 ? S.block(0, 0, p, p).cwiseAbs().maxCoeff() : 0.0;
        const double v22 = q > 0 ? S.block(p, p, q, q).cwiseAbs().maxCoeff() : 0.0;
        v = std::max(v11, v22);
      }
      rep.max_violation = std::max(rep.max_violation, v);
    }
  }
  rep.pass = rep.max_violation <= 1e-14;
  return rep;
}

namespace {

double l1_trapezoid(const SampledMatrixFunction& f, Eigen::Index row0, Eigen::Index rows,
                    Eigen::Index col0, Eigen::Index cols, const CVec& z) {
  const double h = f.step();
  double acc = 0.0;
  for (std::size_t i = 0; i < f.samples.size(); ++i) {
    const double v = (f.samples[i].block(row0, col0, rows, cols) * z).norm();
    acc += (i == 0 || i + 1 == f.samples.size()) ? 0.5 * v : v;
  }
  return acc * h;
}

}  // namespace

L1Report verify_l1_estimates(const BlockSystem2x2& sys, const DysonPhillipsExpansion& exp,
                             const std::vector<CVec>& probes_E,
                             const std::vector<CVec>& probes_F) {
  if (!sys.bounds) throw BoundsMissing("verify_l1_estimates: sys.bounds not set");
  const BlockBounds& b = *sys.bounds;
  if (!(b.eps1 < 0.0) || !(b.eps2 < 0.0)) {
    throw BoundsMissing("verify_l1_estimates: need eps1, eps2 < 0");
  }
  const double T = exp.terms.front().time_grid.back();
  if (std::exp(std::max(b.eps1, b.eps2) * T) > 1e-6) {
    throw InvalidSize("verify_l1_estimates: grid too short, e^{eps T} > 1e-6");
  }
  const double slack = 1.0 + 1e-2;
  const double nJ = operator_norm(sys.J);
  const double nK = operator_norm(sys.K);
  const double M = b.M1 * b.M2 * nJ * nK / (b.eps1 * b.eps2);
  const Eigen::Index p = exp.p;
  const Eigen::Index q = exp.q;

  L1Report rep;
  rep.all_pass = true;
  auto push = [&](std::size_t n, int which, double lhs, double rhs) {
    L1Estimate e{n, which, lhs, rhs, lhs <= rhs * slack};
    rep.all_pass = rep.all_pass && e.pass;
    rep.entries.push_back(e);
  };
  const double Mn0 = 1.0;
  for (std::size_t n = 0; 2 * n + 1 < exp.terms.size(); ++n) {
    const double Mn = Mn0 * std::pow(M, static_cast<double>(n));
    for (const CVec& x : probes_E) {
      push(n, 1, l1_trapezoid(exp.terms[2 * n], 0, p, 0, p, x),
           Mn * b.M1 / std::abs(b.eps1) * x.norm());
      push(n, 4, l1_trapezoid(exp.terms[2 * n + 1], p, q, 0, p, x),
           Mn * b.M1 * b.M2 * nK / (b.eps1 * b.eps2) * x.norm());
    }
    for (const CVec& y : probes_F) {
      push(n, 2, l1_trapezoid(exp.terms[2 * n], p, q, p, q, y),
           Mn * b.M2 / std::abs(b.eps2) * y.norm());
      push(n, 3, l1_trapezoid(exp.terms[2 * n + 1], 0, p, p, q, y),
           Mn * b.M1 * b.M2 * nJ / (b.eps1 * b.eps2) * y.norm());
    }
  }
  return rep;
}

StabilityCertificate smallness_criterion(const BlockSystem2x2& sys, std::vector<CVec> probes) {
  if (!sys.bounds) throw BoundsMissing("smallness_criterion: sys.bounds not set");
  const BlockBounds& b = *sys.bounds;
  if (!(b.eps1 < 0.0) || !(b.eps2 < 0.0)) {
    throw BoundsMissing("smallness_criterion: need eps1, eps2 < 0");
  }
  const double nJ = operator_norm(sys.J);
  const double nK = operator_norm(sys.K);
  StabilityCertificate cert;
  cert.M = b.M1 * b.M2 * nJ * nK / (b.eps1 * b.eps2);
  cert.M0 = b.M1 / std::abs(b.eps1) + b.M2 / std::abs(b.eps2) +
            b.M1 * b.M2 * nJ / (b.eps1 * b.eps2) + b.M1 * b.M2 * nK / (b.eps1 * b.eps2);
  const CMat calH = sys.assembled();
  cert.spectral_abscissa = spectral_abscissa(calH);
  if (!(cert.M < 1.0)) {
    cert.verdict = StabilityVerdict::inconclusive;
    return cert;
  }
  cert.verdict = StabilityVerdict::uniformly_exponentially_stable;

  // Datko-type evidence: truncate where e^{eps T} <= 1e-6 and add the
  // analytic tail bound M0 e^{eps T} / |eps|.
  const double eps = std::max(b.eps1, b.eps2);
  const double T = std::log(1e6) / std::abs(eps);
  const std::size_t steps = 600;
  if (probes.empty()) {
    std::mt19937_64 rng(0x5eed);
    std::normal_distribution<double> gauss;
    for (int k = 0; k < 5; ++k) {
      CVec z(calH.rows());
      for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = Complex(gauss(rng), gauss(rng));
      probes.push_back(z.normalized());
    }
  }
  const double h = T / static_cast<double>(steps);
  const CMat E = matrix_exponential(calH, h);
  cert.integral_bound_ok = true;
  for (const CVec& z : probes) {
    double acc = 0.0;
    CVec w = z;
    for (std::size_t i = 0; i <= steps; ++i) {
      const double v = w.norm();
      acc += (i == 0 || i == steps) ? 0.5 * v : v;
      if (i < steps) w = E * w;
    }
    const double integral = acc * h + cert.M0 * std::exp(eps * T) / std::abs(eps);
    if (integral > cert.M0 / (1.0 - cert.M) * z.norm() * (1.0 + 1e-9)) {
      cert.integral_bound_ok = false;
    }
  }
  return cert;
}

CoupledBoundednessReport coupled_boundedness(const BlockSystem2x2& sys, double T_max) {
  if (sys.J.size() > 0 && sys.J.cwiseAbs().maxCoeff() != 0.0) {
    throw PremiseViolated("coupled_boundedness: requires J = 0");
  }
  if (!sys.bounds) throw BoundsMissing("coupled_boundedness: sys.bounds not set");
  CoupledBoundednessReport rep;
  rep.premise_ok = sys.bounds->eps1 < 0.0 || sys.bounds->eps2 < 0.0;
  rep.boundedness = check_boundedness(sys.assembled(), T_max, 1e6);
  // with J = 0 the series terminates: S_k = 0 for k >= 2
  const auto exp = dyson_phillips(sys, 1.0, 32, 3);
  double v = 0.0;
  for (std::size_t k = 2; k < exp.terms.size(); ++k) {
    for (const CMat& S : exp.terms[k].samples) {
      if (S.size() > 0) v = std::max(v, S.cwiseAbs().maxCoeff());
    }
  }
  rep.series_termination_violation = v;
  return rep;
}

DisjointnessReport spectral_disjointness(const BlockSystem2x2& sys, double tol) {
  DisjointnessReport rep;
  if (sys.p() > 0) {
    for (Complex z : eigenvalues(sys.H)) {
      if (std::abs(z.real()) <= tol) rep.near_imag_H.push_back(z);
    }
  }
  if (sys.q() > 0) {
    for (Complex z : eigenvalues(sys.Lb)) {
      if (std::abs(z.real()) <= tol) rep.near_imag_Lb.push_back(z);
    }
  }
  for (Complex a : rep.near_imag_H) {
    for (Complex b : rep.near_imag_Lb) {
      rep.min_cross_distance = std::min(rep.min_cross_distance, std::abs(a - b));
    }
  }
  rep.disjoint = rep.min_cross_distance > tol;
  return rep;
}

}  // namespace dynbc
