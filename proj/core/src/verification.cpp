// Copyright 2026 The qsl authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qsl/verification.hpp"

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "qsl/ledger.hpp"
#include "qsl/scenarios.hpp"

namespace qsl {

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(const char* pattern, ...) {
  char buf[512];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof(buf), pattern, args);
  va_end(args);
  return buf;
}

// Random product-Gibbs setup with one system factor and 1-3 microbaths,
// total dimension in [4, max_dim].
PreparedSetup random_product_setup(Rng& rng, Index max_dim) {
  std::uniform_int_distribution<int> dim_pick(2, 4);
  std::uniform_int_distribution<int> bath_count(1, 3);
  std::uniform_real_distribution<double> log_beta(std::log(0.2), std::log(3.0));

  const int baths = bath_count(rng);
  std::vector<Index> dims;
  Index total = dim_pick(rng);
  dims.push_back(total);
  for (int b = 0; b < baths; ++b) {
    if (total * 2 > max_dim) break;
    Index d = dim_pick(rng);
    if (total * d > max_dim) d = 2;
    dims.push_back(d);
    total *= d;
  }

  std::vector<Factor> factors;
  std::map<std::string, HermitianOperator> hams;
  const std::size_t sys_pos = std::uniform_int_distribution<std::size_t>(0, dims.size() - 1)(rng);
  for (std::size_t k = 0; k < dims.size(); ++k) {
    const std::string label = (k == sys_pos) ? "sys" : ("b" + std::to_string(k));
    if (k == sys_pos) {
      factors.push_back({label, dims[k], FactorKind::system, std::nullopt});
    } else {
      factors.push_back({label, dims[k], FactorKind::microbath, std::exp(log_beta(rng))});
    }
    // Unit spectral radius keeps every Gibbs factor numerically full rank, so
    // the ln-support convention never truncates ensemble statistics.
    HermitianOperator h = random_hermitian(dims[k], rng);
    const double radius = spectral(h).eigenvalues.cwiseAbs().maxCoeff();
    hams.insert_or_assign(label, hermitian_unchecked(h.matrix() / std::max(radius, 1e-6)));
  }
  SetupLayout layout(std::move(factors));
  return build_product_setup(layout, random_density(layout.factors()[sys_pos].dim, rng), hams);
}

// Haar unitary or a 2-4 branch mixture of Haar unitaries.
Protocol random_protocol(Rng& rng, Index total_dim) {
  std::uniform_int_distribution<int> coin(0, 1);
  if (coin(rng) == 0) {
    return {UnitaryStep{random_unitary(total_dim, rng)}};
  }
  const int branches = std::uniform_int_distribution<int>(2, 4)(rng);
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  std::vector<double> p(branches);
  double total = 0.0;
  for (auto& v : p) total += (v = unit(rng));
  MixtureStep mix;
  for (int b = 0; b < branches; ++b) {
    mix.branches.emplace_back(p[b] / total, Protocol{UnitaryStep{random_unitary(total_dim, rng)}});
  }
  return {mix};
}

CriterionResult timed(int id, std::string name,
                      const std::function<std::pair<bool, std::string>()>& body) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  const auto start = Clock::now();
  try {
    auto [pass, detail] = body();
    r.pass = pass;
    r.detail = std::move(detail);
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return r;
}

} // namespace

std::vector<CriterionResult> run_verification_suite(std::uint64_t seed, const Tolerances& tol) {
  std::vector<CriterionResult> results;

  // Shared ensemble for criteria 1 and 2.
  struct Case {
    PreparedSetup setup;
    DensityMatrix rho_f;
  };
  std::vector<Case> ensemble;

  results.push_back(timed(1, "clausius holds on 500 random product-Gibbs setups", [&] {
    Rng rng(seed);
    double min_slack = 1e300;
    for (int i = 0; i < 500; ++i) {
      PreparedSetup setup = random_product_setup(rng, 32);
      const Protocol protocol = random_protocol(rng, setup.layout.total_dim());
      DensityMatrix rho_f = evolve(setup, protocol);
      const auto report = clausius(setup, rho_f, nullptr, tol);
      min_slack = std::min(min_slack, report.slack);
      ensemble.push_back({std::move(setup), std::move(rho_f)});
      if (report.verdict != Verdict::holds) {
        return std::make_pair(false, fmt("case %d violated: slack = %.3e", i, report.slack));
      }
    }
    return std::make_pair(true, fmt("500/500 hold; min slack = %.3e", min_slack));
  }));
  const bool runtime1_ok = results.back().seconds < 60.0;
  if (!runtime1_ok) {
    results.back().pass = false;
    results.back().detail += " [runtime budget 60 s exceeded]";
  }

  results.push_back(timed(2, "strong-form identity on the same ensemble", [&] {
    double worst = 0.0;
    for (const auto& c : ensemble) {
      const auto weak = clausius(c.setup, c.rho_f, nullptr, tol);
      const auto strong = clausius_strong(c.setup, c.rho_f, nullptr, tol);
      if (strong.verdict == Verdict::inapplicable) continue;
      // Slack difference must equal the total bath divergence.
      const double residual = std::abs((weak.slack - strong.slack) - strong.rhs);
      worst = std::max(worst, residual);
      // Per-bath identity: beta_k q_k - dS_k = D_k.
      for (std::size_t k : c.setup.layout.microbath_indices()) {
        const auto& f = c.setup.layout.factors()[k];
        const auto bath_f = c.setup.reduced(c.rho_f, f.label);
        const auto bath_0 = c.setup.reduced(f.label);
        const double ds = vn_entropy(bath_f, tol) - vn_entropy(bath_0, tol);
        const double bq = *f.beta * (expectation(bath_f, c.setup.local_hamiltonian(f.label)) -
                                     expectation(bath_0, c.setup.local_hamiltonian(f.label)));
        const double d = relative_entropy(bath_f, bath_0, tol);
        if (std::isfinite(d)) worst = std::max(worst, std::abs(bq - ds - d));
      }
      if (worst > 1e-8) return std::make_pair(false, fmt("identity residual %.3e", worst));
    }
    return std::make_pair(true, fmt("max identity residual = %.3e", worst));
  }));
  ensemble.clear();

  results.push_back(timed(3, "CCI holds where the plain CI fails or is out of regime", [&] {
    // (a) Coupled-Gibbs instance (g = 0.5): find a protocol whose formal
    // Clausius value goes negative while the CCI stays nonnegative.
    SetupLayout layout({Factor{"hot", 2, FactorKind::microbath, 1.0},
                        Factor{"sys", 2, FactorKind::system, std::nullopt},
                        Factor{"cold", 2, FactorKind::microbath, 2.0}});
    std::map<std::string, HermitianOperator> hams{{"hot", number_operator(2)},
                                                  {"sys", number_operator(2)},
                                                  {"cold", number_operator(2)}};
    const HermitianOperator h_int0 =
        hermitian_unchecked(0.5 * swap_generator(2).matrix());
    const PreparedSetup coupled = build_coupled_gibbs_setup(layout, "hot", h_int0, hams);

    // Protocols localized on the correlated (hot, sys) block; Haar-random
    // global unitaries scramble too much for the correlation term to matter.
    Rng rng(seed + 1);
    bool found = false;
    int found_at = -1;
    for (int i = 0; i < 200 && !found; ++i) {
      const HermitianOperator g = random_hermitian(4, rng);
      const double theta = std::uniform_real_distribution<double>(0.05, 1.2)(rng);
      const Protocol protocol{UnitaryStep{UnitaryOperator(
          embed(hamiltonian_exponential(g, theta).matrix(), layout.dims(), {0, 1}))}};
      const DensityMatrix rho_f = evolve(coupled, protocol);
      const auto ci = clausius(coupled, rho_f, nullptr, tol);
      const auto corr = cci(coupled, rho_f, nullptr, tol);
      const bool ci_fails =
          ci.verdict == Verdict::inapplicable && ci.slack < -tol.slack;
      if (ci_fails && corr.slack >= -tol.slack) {
        found = true;
        found_at = i;
      }
    }
    if (!found) {
      return std::make_pair(false,
                            std::string("no CI-violating, CCI-satisfying instance in 200 tries"));
    }

    // (b) CCI on 500 random correlated full-rank preparations.
    double min_slack = 1e300;
    for (int i = 0; i < 500; ++i) {
      std::uniform_int_distribution<int> dim_pick(2, 4);
      const Index d_sys = dim_pick(rng), d_env = dim_pick(rng);
      SetupLayout rl({Factor{"sys", d_sys, FactorKind::system, std::nullopt},
                      Factor{"env", d_env, FactorKind::microbath, 1.0}});
      std::map<std::string, HermitianOperator> rh{{"sys", random_hermitian(d_sys, rng)},
                                                  {"env", random_hermitian(d_env, rng)}};
      PreparedSetup s{rl,
                      random_density(d_sys * d_env, rng),
                      rh,
                      HermitianOperator::zero(d_sys * d_env),
                      true,
                      PreparationKind::product,
                      std::nullopt,
                      {}};
      const Protocol protocol = random_protocol(rng, s.layout.total_dim());
      const DensityMatrix rho_f = evolve(s, protocol);
      const auto report = cci(s, rho_f, nullptr, tol);
      min_slack = std::min(min_slack, report.slack);
      if (report.verdict != Verdict::holds) {
        return std::make_pair(false, fmt("random correlated case %d: slack %.3e", i, report.slack));
      }
    }
    return std::make_pair(
        true, fmt("instance found at protocol %d; 500/500 correlated preparations hold; "
                  "min CCI slack = %.3e",
                  found_at, min_slack));
  }));

  results.push_back(timed(4, "global passivity family and passivity-divergence", [&] {
    Rng rng(seed + 2);
    const std::vector<double> alphas{0.5, 1.0, 2.0, 3.0};
    double min_alpha_slack = 1e300, min_pd_slack = 1e300;
    std::uniform_int_distribution<int> dim_pick(4, 16);
    for (int i = 0; i < 200; ++i) {
      const Index d = dim_pick(rng);
      const DensityMatrix rho0 = random_density(d, rng);

      // Random mixture of 2-4 unitaries.
      const int branches = std::uniform_int_distribution<int>(2, 4)(rng);
      std::uniform_real_distribution<double> unit(0.05, 1.0);
      std::vector<std::pair<double, Matrix>> flats;
      double total = 0.0;
      for (int b = 0; b < branches; ++b) {
        flats.emplace_back(unit(rng), random_unitary_matrix(d, rng));
        total += flats.back().first;
      }
      Matrix rho_f_m = Matrix::Zero(d, d);
      for (auto& [p, u] : flats) rho_f_m += (p / total) * u * rho0.matrix() * u.adjoint();
      const DensityMatrix rho_f(rho_f_m);

      for (double alpha : alphas) {
        const auto b = global_passivity_operator(rho0, alpha, RankPolicy::strict, tol);
        const double slack =
            ((rho_f.matrix() - rho0.matrix()) * b.b.matrix()).trace().real();
        min_alpha_slack = std::min(min_alpha_slack, slack);
        if (slack < -1e-9) {
          return std::make_pair(false, fmt("case %d alpha %.1f slack %.3e", i, alpha, slack));
        }
      }
      const auto b1 = global_passivity_operator(rho0, 1.0, RankPolicy::strict, tol);
      const double pd = ((rho_f.matrix() - rho0.matrix()) * b1.b.matrix()).trace().real() -
                        relative_entropy(rho_f, rho0, tol);
      min_pd_slack = std::min(min_pd_slack, pd);
      if (pd < -1e-9) {
        return std::make_pair(false, fmt("case %d passivity-divergence slack %.3e", i, pd));
      }
    }
    return std::make_pair(true, fmt("200 protocols x 4 alphas hold; min alpha slack = %.3e, "
                                    "min passivity-divergence slack = %.3e",
                                    min_alpha_slack, min_pd_slack));
  }));

  results.push_back(timed(5, "stepwise isotherm: monotone slack with c/n fit", [&] {
    const std::vector<HermitianOperator> path = {
        HermitianOperator::diagonal(Eigen::Vector2d(0.0, 1.0)),
        HermitianOperator::diagonal(Eigen::Vector2d(0.0, 2.0))};
    SetupLayout layout({Factor{"sys", 2, FactorKind::system, std::nullopt}});
    std::map<std::string, HermitianOperator> hams{{"sys", path.front()}};
    const PreparedSetup setup =
        build_product_setup(layout, gibbs_state(path.front(), 1.0), hams);

    auto slack_at = [&](int n) {
      const auto acct = account(setup, stepwise_isotherm(path, 1.0, n));
      return clausius(setup, *acct.rho_final, &acct, tol).slack;
    };
    const double s2 = slack_at(2), s8 = slack_at(8), s16 = slack_at(16), s32 = slack_at(32),
                 s64 = slack_at(64);
    if (!(s2 > s8 && s8 > s32 && s32 > s64)) {
      return std::make_pair(false, fmt("not monotone: %.3e %.3e %.3e %.3e", s2, s8, s32, s64));
    }
    const std::vector<std::pair<int, double>> pts{{8, s8}, {16, s16}, {32, s32}, {64, s64}};
    double num = 0.0, den = 0.0;
    for (auto [n, s] : pts) {
      num += s / n;
      den += 1.0 / (static_cast<double>(n) * n);
    }
    const double c = num / den;
    double worst_rel = 0.0;
    for (auto [n, s] : pts) {
      worst_rel = std::max(worst_rel, std::abs(s - c / n) / (c / n));
    }
    if (worst_rel >= 0.10) {
      return std::make_pair(false, fmt("c/n fit residual %.1f%% exceeds 10%%", 100 * worst_rel));
    }
    return std::make_pair(true, fmt("slacks %.4e > %.4e > %.4e > %.4e; c = %.4f, "
                                    "worst c/n residual %.1f%%",
                                    s2, s8, s32, s64, c, 100 * worst_rel));
  }));

  results.push_back(timed(6, "Landauer: erasure heat >= ln 2, quasi-static approach", [&] {
    // One-shot erasure: full swap of a maximally mixed qubit with a cold
    // large-gap thermal qubit.
    SetupLayout layout({Factor{"sys", 2, FactorKind::system, std::nullopt},
                        Factor{"b", 2, FactorKind::microbath, 1.0}});
    std::map<std::string, HermitianOperator> hams{
        {"sys", number_operator(2)},
        {"b", hermitian_unchecked(4.0 * number_operator(2).matrix())}};
    const PreparedSetup setup =
        build_product_setup(layout, DensityMatrix::maximally_mixed(2), hams);
    const Protocol swap_protocol{
        UnitaryStep{UnitaryOperator(embed(swap_unitary(2).matrix(), layout.dims(), {0, 1}))}};
    const auto acct = account(setup, swap_protocol);
    const auto report = clausius(setup, *acct.rho_final, &acct, tol);
    const double beta_q_oneshot = report.term("beta_q[b]");
    const double ln2 = std::log(2.0);
    if (!(beta_q_oneshot >= ln2 - 1e-8)) {
      return std::make_pair(false, fmt("one-shot beta q = %.6f < ln 2", beta_q_oneshot));
    }

    // Quasi-static erasure: ramp the gap 0 -> 25 against fresh baths.
    SetupLayout solo({Factor{"sys", 2, FactorKind::system, std::nullopt}});
    const HermitianOperator h0 = HermitianOperator::diagonal(Eigen::Vector2d(0.0, 0.0));
    const HermitianOperator h1 = HermitianOperator::diagonal(Eigen::Vector2d(0.0, 25.0));
    std::map<std::string, HermitianOperator> solo_hams{{"sys", h0}};
    const PreparedSetup chain_setup =
        build_product_setup(solo, DensityMatrix::maximally_mixed(2), solo_hams);
    auto beta_q_at = [&](int n) {
      const auto a = account(chain_setup, stepwise_isotherm({h0, h1}, 1.0, n));
      double bq = 0.0;
      for (const auto& t : a.transient) bq += t.beta * t.q;
      return bq;
    };
    const double q4 = beta_q_at(4), q32 = beta_q_at(32), q256 = beta_q_at(256);
    const bool monotone = q4 > q32 && q32 > q256;
    const bool above = q4 >= ln2 - 1e-8 && q32 >= ln2 - 1e-8 && q256 >= ln2 - 1e-8;
    const bool approaches = (q256 - ln2) < (q4 - ln2) / 8.0 && (q256 - ln2) < 0.06;
    if (!(monotone && above && approaches)) {
      return std::make_pair(false, fmt("chain beta q: %.4f %.4f %.4f (ln 2 = %.4f)", q4, q32,
                                       q256, ln2));
    }
    return std::make_pair(true,
                          fmt("one-shot beta q = %.4f >= ln 2; chain %.4f > %.4f > %.4f -> ln 2",
                              beta_q_oneshot, q4, q32, q256));
  }));

  results.push_back(timed(7, "coherence-removal work: ln 2 for |+>, route agreement", [&] {
    Eigen::VectorXcd plus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    const auto ka = ka_coherence_work(DensityMatrix::pure(plus), number_operator(2), 1.0, tol);
    const double ln2 = std::log(2.0);
    if (std::abs(ka.w_rev - ln2) > 1e-9 ||
        std::abs(ka.delta_s_divergence_route - ln2) > 1e-9) {
      return std::make_pair(false, fmt("w_rev = %.12f, expected ln 2", ka.w_rev));
    }
    Rng rng(seed + 3);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const Index d = (i % 2 == 0) ? 2 : 3;
      const auto r = ka_coherence_work(random_density(d, rng), random_hermitian(d, rng), 0.7, tol);
      worst = std::max(worst, std::abs(r.delta_s_entropy_route - r.delta_s_divergence_route));
      if (worst > 1e-9) return std::make_pair(false, fmt("route mismatch %.3e at case %d", worst, i));
    }
    return std::make_pair(true, fmt("|+> gives ln 2; max route mismatch = %.3e over 100 states",
                                    worst));
  }));

  results.push_back(timed(8, "X-machine optimality at dimension 24", [&] {
    SetupLayout layout({Factor{"sys", 3, FactorKind::system, std::nullopt},
                        Factor{"s1", 2, FactorKind::microbath, 1.0},
                        Factor{"s2", 2, FactorKind::microbath, 1.0},
                        Factor{"s3", 2, FactorKind::microbath, 1.0}});
    std::map<std::string, HermitianOperator> hams{{"sys", number_operator(3)},
                                                  {"s1", number_operator(2)},
                                                  {"s2", number_operator(2)},
                                                  {"s3", number_operator(2)}};
    const PreparedSetup setup =
        build_product_setup(layout, gibbs_state(number_operator(3), 1.0), hams);
    RealVector proj(3);
    proj << 0.0, 0.0, 1.0;
    const Matrix target = embed(Matrix(proj.cast<Complex>().asDiagonal()), layout.dims(), {0});
    const XMachineTask task{hermitian_unchecked(target), setup};
    const auto opt = xmachine_optimum(task);

    // Oracle: sum of the 8 smallest eigenvalues of rho0 (the projector has
    // eight unit eigenvalues and sixteen zeros).
    Eigen::SelfAdjointEigenSolver<Matrix> solver(setup.rho0.matrix(), Eigen::EigenvaluesOnly);
    const double oracle = solver.eigenvalues().head(8).sum();
    if (std::abs(opt.minimum - oracle) > 1e-10) {
      return std::make_pair(false, fmt("optimum %.12f vs eigenvalue oracle %.12f", opt.minimum,
                                       oracle));
    }
    Rng rng(seed + 4);
    double best_random = 1e300;
    for (int s = 0; s < 100000; ++s) {
      const Matrix u = random_unitary_matrix(24, rng);
      const Matrix moved = u * setup.rho0.matrix() * u.adjoint();
      best_random = std::min(best_random, (moved * target).trace().real());
    }
    if (best_random < opt.minimum - 1e-9) {
      return std::make_pair(false, fmt("random search beat the optimum: %.12f < %.12f",
                                       best_random, opt.minimum));
    }
    return std::make_pair(true, fmt("optimum = %.10f matches oracle; best of 1e5 random "
                                    "unitaries = %.10f",
                                    opt.minimum, best_random));
  }));
  if (results.back().seconds >= 30.0) {
    results.back().pass = false;
    results.back().detail += " [runtime budget 30 s exceeded]";
  }

  results.push_back(timed(9, "lazy-demon staircase: none / alpha / ci regions", [&] {
    const auto construction = make_lazy_demon();
    std::vector<double> duty_grid;
    for (int i = 0; i <= 40; ++i) duty_grid.push_back(i / 40.0);
    const auto rows = run_lazy_demon_sweep(construction.setup, construction.demon, duty_grid);
    bool saw_none = false, saw_alpha = false, saw_ci = false;
    double first_alpha = -1.0, first_ci = -1.0;
    for (const auto& row : rows) {
      switch (row.verdict.kind) {
        case DemonVerdict::Kind::none_detected: saw_none = true; break;
        case DemonVerdict::Kind::alpha_violation:
          saw_alpha = true;
          if (first_alpha < 0) first_alpha = row.duty;
          break;
        case DemonVerdict::Kind::ci_violation:
          saw_ci = true;
          if (first_ci < 0) first_ci = row.duty;
          break;
      }
    }
    if (saw_none && saw_alpha && saw_ci) {
      return std::make_pair(true, fmt("alpha detection from duty %.3f, CI detection from duty "
                                      "%.3f (41-point grid)",
                                      first_alpha, first_ci));
    }
    std::ostringstream grid;
    for (double d : duty_grid) grid << d << " ";
    return std::make_pair(false, "negative result: regions {none=" + std::to_string(saw_none) +
                                     ", alpha=" + std::to_string(saw_alpha) +
                                     ", ci=" + std::to_string(saw_ci) +
                                     "} on duty grid [ " + grid.str() + "]");
  }));

  results.push_back(timed(10, "thermal fixed point and contractivity", [&] {
    const double beta = 1.3;
    const HermitianOperator h_qubit = number_operator(2);
    const QuantumChannel ch(gibbs_state(h_qubit, beta), excitation_exchange(0.7));
    const double residual = fixed_point_residual(ch, gibbs_state(h_qubit, beta));
    if (residual >= 1e-9) {
      return std::make_pair(false, fmt("thermal fixed-point residual %.3e", residual));
    }
    const double off_residual = fixed_point_residual(ch, gibbs_state(h_qubit, 0.4));
    if (off_residual < 1e-6) {
      return std::make_pair(false,
                            std::string("wrong-temperature state looks like a fixed point"));
    }
    Rng rng(seed + 5);
    double worst = 1e300;
    for (int i = 0; i < 500; ++i) {
      const auto [before, after] =
          check_contractivity(ch, random_density(2, rng), random_density(2, rng));
      worst = std::min(worst, before - after);
      if (after > before + 1e-9) {
        return std::make_pair(false, fmt("contractivity violated: %.3e -> %.3e", before, after));
      }
    }
    return std::make_pair(true, fmt("fixed-point residual %.2e; 500 contractivity pairs hold "
                                    "(min contraction %.3e)",
                                    residual, worst));
  }));

  results.push_back(timed(11, "cold-bath and dephasing deficiency reproductions", [&] {
    // Cold bath: beta = 50, fixed partial swap; entropy term negligible.
    SetupLayout layout({Factor{"sys", 2, FactorKind::system, std::nullopt},
                        Factor{"b", 2, FactorKind::microbath, 50.0}});
    std::map<std::string, HermitianOperator> hams{{"sys", number_operator(2)},
                                                  {"b", number_operator(2)}};
    const PreparedSetup cold =
        build_product_setup(layout, DensityMatrix::diagonal(Eigen::Vector2d(0.4, 0.6)), hams);
    const Protocol pswap{
        UnitaryStep{UnitaryOperator(embed(partial_swap(2, 0.7853981633974483).matrix(),
                                          layout.dims(), {0, 1}))}};
    const DensityMatrix rho_f = evolve(cold, pswap);
    const auto report = clausius(cold, rho_f, nullptr, tol);
    const double ratio = std::abs(report.term("delta_S_sys")) / std::abs(report.term("beta_q[b]"));
    if (!(ratio < 0.05)) {
      return std::make_pair(false, fmt("|dS|/|beta q| = %.4f not < 0.05", ratio));
    }

    // Dephasing: commuting interaction, no heat, entropy can only grow.
    const auto bundle = run_scenario(builtin_scenario("dephasing-deficiency"), tol);
    double q_deph = 0.0, ds_deph = 0.0;
    for (const auto& rep : bundle.reports) {
      if (rep.name == "clausius") {
        q_deph = rep.term("beta_q[b1]");
        ds_deph = rep.term("delta_S_sys");
      }
    }
    if (std::abs(q_deph) > 1e-12) {
      return std::make_pair(false, fmt("dephasing moved bath energy: beta q = %.3e", q_deph));
    }
    if (ds_deph < -1e-12) {
      return std::make_pair(false, fmt("dephasing lowered system entropy: %.3e", ds_deph));
    }
    return std::make_pair(true, fmt("cold-bath ratio = %.4f; dephasing beta q = %.1e with "
                                    "dS_sys = %.4f >= 0",
                                    ratio, q_deph, ds_deph));
  }));

  return results;
}

} // namespace qsl
