// Copyright (c) 2026 the dynbc authors
// SPDX-License-Identifier: Apache-2.0

#include "dynbc/pipeline.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <memory>
#include <thread>

#include "dynbc/semigroup.hpp"
#include "dynbc/stability.hpp"

namespace dynbc::cli {

namespace {

using Clock = std::chrono::steady_clock;

json eigen_list(const std::vector<Complex>& ev, std::size_t cap = 64) {
  json out = json::array();
  for (std::size_t i = 0; i < ev.size() && i < cap; ++i) out.push_back(complex_to_json(ev[i]));
  return out;
}

double max_sorted_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

/// Smooth state in the constrained set: u the Dirichlet lift of unit boundary
/// data, v = 0. Reduced coordinates via the system's similarity pair.
CVec smooth_initial_state(const DiscreteProblem& p, const ReducedSystem& r) {
  const Eigen::Index N = p.dim_X;
  const Eigen::Index m = p.dim_dX;
  CVec amb = CVec::Zero(2 * N + 2 * m);
  if (m > 0) {
    const CVec bdata = CVec::Ones(m);
    amb.segment(0, N) = r.D * bdata;
    amb.segment(N, m) = p.L * amb.segment(0, N);
  } else {
    amb.segment(0, N) = CVec::Ones(N);
  }
  CVec z = r.embedding.adjoint() * (r.U * amb);
  const double nrm = z.norm();
  return nrm > 0 ? CVec(z / nrm) : z;
}

void write_trace_csv(const std::string& path, const EvolutionTrace& trace,
                     const ReducedSystem& r) {
  std::ofstream out(path);
  out << "t";
  for (const auto& b : r.block_map) out << "," << b.name << "_norm";
  out << ",total_norm\n";
  out.precision(15);
  for (std::size_t i = 0; i < trace.time_grid.size(); ++i) {
    out << trace.time_grid[i];
    for (const auto& b : r.block_map) {
      out << "," << trace.states[i].segment(b.begin, b.size()).norm();
    }
    out << "," << trace.states[i].norm() << "\n";
  }
}

struct Workspace {
  DiscreteProblem problem;
  Complex lambda;
  std::shared_ptr<const ReducedSystem> system;
  double abscissa = 0.0;
};

CheckResult run_one(Check check, const ScenarioConfig& cfg, const Workspace& ws,
                    const std::string& out_dir) {
  CheckResult res;
  res.name = to_string(check);
  const auto t0 = Clock::now();
  const RunSettings& rs = cfg.run;
  const ReducedSystem& R = *ws.system;
  try {
    switch (check) {
      case Check::spectrum: {
        const auto ev = eigenvalues(R.G);
        res.evidence["spectral_abscissa"] = ws.abscissa;
        res.evidence["dimension"] = R.G.rows();
        res.evidence["eigenvalues"] = eigen_list(ev);
        res.status = "pass";
        break;
      }
      case Check::similarity: {
        const auto ev_con = eigenvalues(assemble_A_constrained(ws.problem));
        const auto ev1 = eigenvalues(R.G);
        Complex lambda2 = ws.lambda + Complex(1.0, 0.5);
        ReducedSystem R2 = [&] {
          try {
            return assemble(ws.problem, lambda2);
          } catch (const LambdaInSpectrum&) {
            lambda2 = ws.lambda + Complex(2.0, 1.0);
            return assemble(ws.problem, lambda2);
          }
        }();
        const auto ev2 = eigenvalues(R2.G);
        const double d1 = max_sorted_distance(ev1, ev_con);
        const double d2 = max_sorted_distance(ev2, ev_con);
        const double u_err = std::max(
            operator_norm(R.U * R.U_inv - CMat::Identity(R.U.rows(), R.U.cols())),
            operator_norm(R2.U * R2.U_inv - CMat::Identity(R2.U.rows(), R2.U.cols())));
        res.evidence["lambda"] = complex_to_json(ws.lambda);
        res.evidence["lambda2"] = complex_to_json(lambda2);
        res.evidence["max_spectrum_mismatch"] = std::max(d1, d2);
        res.evidence["u_inverse_residual"] = u_err;
        const bool ok = std::max(d1, d2) <= rs.tol_similarity && u_err <= rs.tol_u_inverse;
        res.status = ok ? "pass" : "fail";
        if (!ok) res.reason = "similarity mismatch above tolerance";
        break;
      }
      case Check::evolve: {
        const CVec z0 = smooth_initial_state(ws.problem, R);
        const EvolutionTrace tr = evolve(ws.system, z0, rs.T, rs.steps);
        const double n0 = tr.states.front().norm();
        const double nT = tr.states.back().norm();
        const std::string csv = out_dir + "/trace_" + ws.problem.scenario + ".csv";
        write_trace_csv(csv, tr, R);
        res.evidence["initial_norm"] = n0;
        res.evidence["final_norm"] = nT;
        res.evidence["csv"] = csv;
        bool ok = true;
        if (ws.abscissa < -1e-9 && nT >= n0) {
          ok = false;
          res.reason = "stable system did not decay over the run horizon";
        }
        res.status = ok ? "pass" : "fail";
        break;
      }
      case Check::boundedness: {
        const auto rep = check_boundedness(R.G, rs.T_max, rs.bound_sup);
        res.evidence["observed_sup"] = rep.observed_sup;
        res.evidence["final_decade_slope"] = rep.final_decade_slope;
        res.status = rep.bounded ? "pass" : "fail";
        if (!rep.bounded) res.reason = "norm exceeds bound or grows in the final decade";
        break;
      }
      case Check::analyticity: {
        const double omega = default_analyticity_shift(R.G);
        const auto rep = check_analyticity(R.G, omega, rs.analyticity_threshold);
        res.evidence["omega"] = rep.omega;
        res.evidence["sup_norms"] = rep.sup_norms;
        res.evidence["skipped_probes"] = rep.skipped_probes;
        res.status = rep.consistent_with_analytic ? "pass" : "fail";
        if (!rep.consistent_with_analytic) res.reason = "resolvent ray sup exceeds threshold";
        break;
      }
      case Check::wentzell: {
        const CVec z0 = smooth_initial_state(ws.problem, R);
        const std::size_t steps = std::max<std::size_t>(rs.steps, 50);
        const EvolutionTrace tr = evolve(ws.system, z0, 1.0, steps);
        const double r = wentzell_residual(ws.problem, tr, steps);
        res.evidence["residual_at_t1"] = r;
        res.status = r <= rs.tol_wentzell ? "pass" : "fail";
        if (res.status == "fail") res.reason = "Wentzell identity residual above tolerance";
        break;
      }
      case Check::dyson_phillips: {
        BlockSystem2x2 sys = split_blocks(R);
        sys = with_growth_bounds(sys, rs.growth_T_max);
        const auto exp = dyson_phillips(sys, rs.T, rs.steps, rs.k_max);
        const auto zp = verify_zero_pattern(exp);
        res.evidence["partial_sum_error"] = exp.partial_sum_error;
        res.evidence["zero_pattern_violation"] = zp.max_violation;
        const bool ok = zp.pass && exp.partial_sum_error <= rs.tol_dyson;
        res.status = ok ? "pass" : "fail";
        if (!ok) res.reason = "series did not reproduce the exponential at tolerance";
        break;
      }
      case Check::stability_certificate: {
        BlockSystem2x2 sys = split_blocks(R);
        sys = with_growth_bounds(sys, rs.growth_T_max);
        if (!(sys.bounds->eps1 < 0.0) || !(sys.bounds->eps2 < 0.0)) {
          res.status = "skipped";
          res.reason = "diagonal blocks have no negative-rate envelope; criterion needs eps < 0";
          break;
        }
        const auto cert = smallness_criterion(sys);
        res.evidence["M"] = cert.M;
        res.evidence["M0"] = cert.M0;
        res.evidence["spectral_abscissa"] = cert.spectral_abscissa;
        res.evidence["verdict"] = cert.verdict == StabilityVerdict::uniformly_exponentially_stable
                                      ? "uniformly_exponentially_stable"
                                      : "inconclusive";
        if (cert.verdict == StabilityVerdict::uniformly_exponentially_stable) {
          res.evidence["integral_bound_ok"] = cert.integral_bound_ok;
          const bool ok = cert.spectral_abscissa < 0.0 && cert.integral_bound_ok;
          res.status = ok ? "pass" : "fail";
          if (!ok) res.reason = "certificate claims stability but evidence disagrees";
        } else {
          res.status = "pass";  // the criterion is sufficient only
        }
        break;
      }
      case Check::cosine: {
        const bool strong = ws.problem.case_tag == CaseTag::strong_damping_unbounded ||
                            ws.problem.case_tag == CaseTag::strong_damping_bounded;
        const auto kr = kernel_restriction(strong ? ws.problem.C : ws.problem.A, ws.problem.L);
        const double t = 0.5, s = 0.25;
        const double resid = dalembert_check(kr.A0, t, s);
        const double scale =
            1.0 + operator_norm(cosine_family(kr.A0, t)) * operator_norm(cosine_family(kr.A0, s));
        res.evidence["dalembert_residual"] = resid;
        res.evidence["tolerance"] = rs.tol_cosine_scale * scale;
        res.status = resid <= rs.tol_cosine_scale * scale ? "pass" : "fail";
        if (res.status == "fail") res.reason = "cosine functional identity violated";
        break;
      }
    }
  } catch (const Error& e) {
    res.status = "fail";
    res.reason = e.what();
  }
  res.wall_ms =
      std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  return res;
}

}  // namespace

unsigned worker_cap() {
  if (const char* env = std::getenv("DYNBC_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

json RunReport::to_json() const {
  json out;
  out["config"] = config_echo;
  out["all_pass"] = all_pass;
  out["checks"] = json::array();
  for (const auto& c : checks) {
    json j;
    j["name"] = c.name;
    j["status"] = c.status;
    if (!c.reason.empty()) j["reason"] = c.reason;
    j["evidence"] = c.evidence;
    j["wall_ms"] = c.wall_ms;
    out["checks"].push_back(j);
  }
  return out;
}

RunReport run_checks(const ScenarioConfig& config, const json& config_echo,
                     const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  Workspace ws;
  ws.problem = config.build();
  ws.lambda = config.lambda ? *config.lambda : default_lambda(ws.problem);
  ws.system = std::make_shared<const ReducedSystem>(assemble(ws.problem, ws.lambda));
  ws.abscissa = spectral_abscissa(ws.system->G);

  RunReport report;
  report.config_echo = config_echo;

  const unsigned cap = std::min<unsigned>(worker_cap(),
                                          std::max<std::size_t>(config.checks.size(), 1));
  std::vector<std::future<CheckResult>> futures;
  futures.reserve(config.checks.size());
  std::size_t next = 0;
  std::vector<CheckResult> results(config.checks.size());
  while (next < config.checks.size()) {
    const std::size_t batch = std::min<std::size_t>(cap, config.checks.size() - next);
    futures.clear();
    for (std::size_t i = 0; i < batch; ++i) {
      const Check c = config.checks[next + i];
      futures.push_back(std::async(std::launch::async,
                                   [&, c] { return run_one(c, config, ws, out_dir); }));
    }
    for (std::size_t i = 0; i < batch; ++i) results[next + i] = futures[i].get();
    next += batch;
  }
  for (auto& r : results) {
    report.all_pass = report.all_pass && r.status != "fail";
    report.checks.push_back(std::move(r));
  }
  return report;
}

namespace {

DiscreteProblem scale_couplings(DiscreteProblem p, double s) {
  const bool slaved =
      (p.L * p.A - p.B1 - p.B3 * p.L).cwiseAbs().maxCoeff() <=
          1e-8 * std::max(1.0, p.A.cwiseAbs().maxCoeff()) &&
      (p.L * p.C - p.B2 - p.B4 * p.L).cwiseAbs().maxCoeff() <=
          1e-8 * std::max(1.0, p.C.cwiseAbs().maxCoeff());
  p.B1 *= s;
  p.B2 *= s;
  if (slaved) {
    for (Eigen::Index k = 0; k < p.dim_dX; ++k) {
      const Eigen::Index r = p.replaced_rows[static_cast<std::size_t>(k)];
      p.A.row(r) = p.B1.row(k) + (p.B3 * p.L).row(k);
      p.C.row(r) = p.B2.row(k) + (p.B4 * p.L).row(k);
    }
  }
  return p;
}

json sweep_row(const DiscreteProblem& base, double s, double growth_T_max) {
  const DiscreteProblem p = scale_couplings(base, s);
  const Complex lambda = default_lambda(p);
  const ReducedSystem R = assemble(p, lambda);
  json row;
  row["s"] = s;
  row["spectral_abscissa"] = spectral_abscissa(R.G);
  BlockSystem2x2 sys = split_blocks(R);
  sys = with_growth_bounds(sys, growth_T_max);
  if (sys.bounds->eps1 < 0.0 && sys.bounds->eps2 < 0.0) {
    row["M"] = smallness_criterion(sys, {CVec::Ones(R.G.rows()).normalized()}).M;
  } else {
    row["M"] = nullptr;
  }
  return row;
}

}  // namespace

json compare_configs(const ScenarioConfig& a, const json& echo_a, const ScenarioConfig& b,
                     const json& echo_b) {
  if (a.scenario != b.scenario) {
    throw IncompatibleScenarios("compare: configs are from different scenario families");
  }
  json out;
  out["scenario"] = to_string(a.scenario);
  out["config_a"] = echo_a;
  out["config_b"] = echo_b;
  const bool identical = echo_a == echo_b;
  out["identical_configs"] = identical;
  out["diff"] = json::array();
  out["sweep_a"] = json::array();
  out["sweep_b"] = json::array();

  const DiscreteProblem pa = a.build();
  const DiscreteProblem pb = b.build();
  auto loss_scale = [](const json& sweep) -> json {
    for (const auto& row : sweep) {
      const bool unstable = row["spectral_abscissa"].get<double>() >= 0.0 ||
                            row["M"].is_null() || row["M"].get<double>() >= 1.0;
      if (unstable) return row["s"];
    }
    return nullptr;
  };
  for (int i = 0; i <= 10; ++i) {
    const double s = 0.1 * i;
    const json ra = sweep_row(pa, s, a.run.growth_T_max);
    const json rb = identical ? ra : sweep_row(pb, s, b.run.growth_T_max);
    out["sweep_a"].push_back(ra);
    out["sweep_b"].push_back(rb);
    if (!identical) {
      json d;
      d["s"] = s;
      d["d_spectral_abscissa"] =
          rb["spectral_abscissa"].get<double>() - ra["spectral_abscissa"].get<double>();
      if (!ra["M"].is_null() && !rb["M"].is_null()) {
        d["d_M"] = rb["M"].get<double>() - ra["M"].get<double>();
      }
      out["diff"].push_back(d);
    }
  }
  out["stability_loss_scale_a"] = loss_scale(out["sweep_a"]);
  out["stability_loss_scale_b"] = loss_scale(out["sweep_b"]);
  return out;
}

}  // namespace dynbc::cli
