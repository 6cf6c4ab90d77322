// Copyright (c) 2026 the dynbc authors
// SPDX-License-Identifier: Apache-2.0

#include "dynbc/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dynbc {

namespace {

EvolutionTrace evolve_impl(const CMat& G, const CVec& u0, double T, std::size_t steps) {
  if (steps < 1 || !(T > 0.0)) throw InvalidSize("evolve: need steps >= 1 and T > 0");
  if (u0.size() != G.rows()) throw DimensionMismatch("evolve: state dimension mismatch");
  const double h = T / static_cast<double>(steps);
  const CMat E = matrix_exponential(G, h);
  EvolutionTrace tr;
  tr.time_grid.resize(steps + 1);
  tr.states.resize(steps + 1);
  tr.norms.resize(steps + 1);
  CMat P = CMat::Identity(G.rows(), G.cols());
  for (std::size_t i = 0; i <= steps; ++i) {
    tr.time_grid[i] = h * static_cast<double>(i);
    tr.states[i] = P * u0;
    tr.norms[i] = operator_norm(P);
    if (!tr.states[i].allFinite()) throw Overflow("evolve: state overflowed");
    if (i < steps) P = E * P;
  }
  return tr;
}

}  // namespace

EvolutionTrace evolve(const CMat& G, const CVec& u0, double T, std::size_t steps) {
  return evolve_impl(G, u0, T, steps);
}

EvolutionTrace evolve(std::shared_ptr<const ReducedSystem> system, const CVec& u0, double T,
                      std::size_t steps) {
  EvolutionTrace tr = evolve_impl(system->G, u0, T, steps);
  tr.system = std::move(system);
  return tr;
}

GrowthBound growth_bound(const CMat& G, double T_max, std::size_t samples, double margin) {
  if (samples < 16) throw InvalidSize("growth_bound: need samples >= 16");
  GrowthBound out;
  out.spectral_abscissa = spectral_abscissa(G);
  if (margin <= 0.0) {
    margin = out.spectral_abscissa == 0.0 ? 1e-6 : 1e-3 * std::abs(out.spectral_abscissa);
  }
  out.epsilon_used = out.spectral_abscissa + margin;

  auto sup_on = [&](std::size_t count) {
    double sup = 0.0;
    for (std::size_t i = 0; i <= count; ++i) {
      const double t = T_max * static_cast<double>(i) / static_cast<double>(count);
      const double v = operator_norm(matrix_exponential(G, t)) * std::exp(-out.epsilon_used * t);
      sup = std::max(sup, v);
    }
    return sup;
  };
  const double coarse = sup_on(samples);
  const double fine = sup_on(2 * samples);
  if (fine > 1.05 * coarse) {
    throw NonConvergedValidation("growth_bound: halved grid raised the envelope by > 5%");
  }
  out.transient_M = std::max({1.0, coarse, fine});
  return out;
}

BoundednessReport check_boundedness(const CMat& G, double T_max, double bound,
                                    std::size_t samples) {
  if (!(T_max > 0.0)) throw InvalidSize("check_boundedness: T_max must be positive");
  BoundednessReport rep;
  const double lo = std::log10(std::min(1e-2, T_max / 100.0));
  const double hi = std::log10(T_max);
  std::vector<double> ts(samples), ns(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    ts[i] = std::pow(10.0, lo + (hi - lo) * static_cast<double>(i) /
                               static_cast<double>(samples - 1));
    CMat E;
    try {
      E = matrix_exponential(G, ts[i]);
    } catch (const Overflow&) {
      rep.observed_sup = std::numeric_limits<double>::infinity();
      rep.bounded = false;
      return rep;
    }
    ns[i] = operator_norm(E);
    rep.observed_sup = std::max(rep.observed_sup, ns[i]);
  }
  // least-squares slope of log-norm vs log-t over the final decade
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t cnt = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    if (ts[i] < T_max / 10.0) continue;
    const double x = std::log(ts[i]);
    const double y = std::log(std::max(ns[i], 1e-300));
    sx += x; sy += y; sxx += x * x; sxy += x * y;
    ++cnt;
  }
  rep.final_decade_slope =
      cnt >= 2 ? (static_cast<double>(cnt) * sxy - sx * sy) /
                     (static_cast<double>(cnt) * sxx - sx * sx)
               : 0.0;
  rep.bounded = std::isfinite(rep.observed_sup) && rep.observed_sup <= bound &&
                rep.final_decade_slope <= 1e-3;
  return rep;
}

namespace {

// ||lambda R(lambda, M)||, or nullopt when the probe hits the spectrum.
std::optional<double> probe_point(const CMat& M, Complex lambda) {
  try {
    return std::abs(lambda) * operator_norm(resolvent(M, lambda));
  } catch (const LambdaInSpectrum&) {
    return std::nullopt;
  }
}

}  // namespace

SectorialityReport check_analyticity(const CMat& G, double omega,
                                     const std::vector<double>& thetas_rad,
                                     const std::vector<double>& radii, double threshold) {
  if (!(omega > spectral_abscissa(G))) {
    throw InvalidSize("check_analyticity: omega must exceed the spectral abscissa");
  }
  CMat M = G;
  M.diagonal().array() -= omega;
  SectorialityReport rep;
  rep.omega = omega;
  rep.thetas = thetas_rad;
  for (double th : thetas_rad) {
    const Complex dir(std::cos(th), std::sin(th));
    double best = 0.0;
    std::size_t best_i = 0;
    std::vector<double> vals(radii.size(), 0.0);
    for (std::size_t i = 0; i < radii.size(); ++i) {
      if (auto v = probe_point(M, radii[i] * dir)) {
        vals[i] = *v;
      } else {
        ++rep.skipped_probes;
        continue;
      }
      if (vals[i] > best) {
        best = vals[i];
        best_i = i;
      }
    }
    // golden-section refinement in log r around the coarse peak
    if (!radii.empty()) {
      const double lo = radii[best_i > 0 ? best_i - 1 : 0];
      const double hi = radii[std::min(best_i + 1, radii.size() - 1)];
      double a = std::log(lo), b = std::log(hi);
      constexpr double gold = 0.6180339887498949;
      double c = b - gold * (b - a), d = a + gold * (b - a);
      auto at = [&](double lr) { return probe_point(M, std::exp(lr) * dir).value_or(0.0); };
      double fc = at(c), fd = at(d);
      for (int it = 0; it < 48; ++it) {
        if (fc > fd) {
          b = d; d = c; fd = fc;
          c = b - gold * (b - a);
          fc = at(c);
        } else {
          a = c; c = d; fc = fd;
          d = a + gold * (b - a);
          fd = at(d);
        }
      }
      best = std::max({best, fc, fd});
    }
    rep.sup_norms.push_back(best);
  }
  rep.consistent_with_analytic =
      std::all_of(rep.sup_norms.begin(), rep.sup_norms.end(),
                  [&](double s) { return s <= threshold; });
  return rep;
}

SectorialityReport check_analyticity(const CMat& G, double omega, double threshold) {
  const std::vector<double> thetas = {85.0 * std::numbers::pi / 180.0,
                                      88.0 * std::numbers::pi / 180.0,
                                      90.0 * std::numbers::pi / 180.0};
  std::vector<double> radii;
  for (double e = -3.0; e <= 6.0 + 1e-9; e += 0.1) radii.push_back(std::pow(10.0, e));
  return check_analyticity(G, omega, thetas, radii, threshold);
}

double default_analyticity_shift(const CMat& G) {
  const double a = spectral_abscissa(G);
  return a + 0.25 * (1.0 + std::abs(a));
}

CMat cosine_family(const CMat& A, double t) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n) throw DimensionMismatch("cosine_family: A must be square");
  CMat M = CMat::Zero(2 * n, 2 * n);
  M.block(0, n, n, n) = CMat::Identity(n, n);
  M.block(n, 0, n, n) = A;
  return matrix_exponential(M, t).block(0, 0, n, n);
}

double dalembert_check(const CMat& A, double t, double s) {
  const CMat c_t = cosine_family(A, t);
  const CMat c_s = cosine_family(A, s);
  return operator_norm(cosine_family(A, t + s) + cosine_family(A, t - s) - 2.0 * c_t * c_s);
}

double wentzell_residual(const DiscreteProblem& p, const EvolutionTrace& trace,
                         std::size_t index) {
  if (!trace.system) {
    throw BlockMapMismatch("wentzell_residual: trace carries no ReducedSystem");
  }
  if (index < 1 || index >= trace.states.size()) {
    throw InvalidSize("wentzell_residual: index must satisfy 1 <= index < samples (t > 0)");
  }
  const ReducedSystem& sys = *trace.system;
  if (sys.dim_X != p.dim_X || sys.dim_dX != p.dim_dX) {
    throw BlockMapMismatch("wentzell_residual: trace system does not match problem");
  }
  const CVec amb = sys.ambient_state(trace.states[index]);
  const Eigen::Index N = p.dim_X;
  const Eigen::Index m = p.dim_dX;
  const CVec u = amb.segment(0, N);
  const CVec x = amb.segment(N, m);
  const CVec v = amb.segment(N + m, N);
  const CVec y = amb.segment(2 * N + m, m);
  const CVec r = p.wentzell_LA * u + p.wentzell_LC * v - p.B1 * u - p.B2 * v - p.B3 * x -
                 p.B4 * y;
  return r.norm();
}

}  // namespace dynbc
