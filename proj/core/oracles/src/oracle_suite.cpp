#include "irsopt/oracle_suite.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "irsopt/irs_fp.hpp"
#include "irsopt/oracles.hpp"
#include "irsopt/power_control.hpp"

namespace irsopt::oracle {

namespace {

double rel_gap(double value, double reference) {
  return std::abs(value - reference) / std::max(std::abs(reference), 1e-300);
}

void record(CheckResult& r, double gap) {
  ++r.trials;
  if (!(gap <= r.worst)) r.worst = std::isnan(gap) ? INFINITY : gap;
}

void close(CheckResult& r) { r.passed = r.worst <= r.tolerance; }

double log_uniform(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

std::vector<cplx> to_std(const CVector& v) { return {v.data(), v.data() + v.size()}; }

std::vector<cplx> random_unit(std::size_t n, Rng& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::vector<cplx> v(n);
  for (auto& x : v) x = std::polar(1.0, angle(rng));
  return v;
}

CVector to_eigen(const std::vector<cplx>& v) {
  CVector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
  return out;
}

CMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal;
  CMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = {normal(rng), normal(rng)};
  return m;
}

}  // namespace

SlotInstance random_slot_instance(const ScenarioConfig& config, Rng& rng) {
  const Deployment dep = make_deployment(config, rng);
  SlotInstance s;
  s.channel = generate_slot(config, dep, rng, 1);
  const auto K = static_cast<std::size_t>(config.num_devices);
  const double lo = static_cast<double>(std::max<std::int64_t>(config.arrival_min, 1));
  const double hi = static_cast<double>(std::max<std::int64_t>(config.arrival_max, 1));
  std::uniform_real_distribution<double> avg(lo, hi), unit(0.0, 1.0);
  std::uniform_int_distribution<std::int64_t> arrival(config.arrival_min, config.arrival_max);
  for (std::size_t k = 0; k < K; ++k) {
    const double a_bar = avg(rng);
    const double a = static_cast<double>(arrival(rng));
    const double q = 60.0 * a_bar * unit(rng);
    const double d = 1.0 * unit(rng);
    s.backlog.push_back(q);
    s.arrival.push_back(a);
    s.weight.push_back((q + a + a_bar * d) * config.slot_duration / (a_bar * a_bar));
  }
  return s;
}

std::vector<CheckResult> check_power_control(const ScenarioConfig& c, int trials, int grid_points, Rng& rng) {
  CheckResult grid{"power closed form vs grid search", true, 0.0, 1e-9, 0, "f1(closed) - min grid f1, absolute"};
  CheckResult kkt{"power stationarity at interior optima", true, 0.0, 1e-8, 0, "|df1/dp| at 0 < p < min(p2, pmax)"};
  CheckResult feas{"power feasibility", true, 0.0, 1e-9, 0, "violation of R tau <= Q+A and 0 <= p <= pmax, bits"};
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < trials; ++i) {
    const double gain = log_uniform(rng, 1e-16, 1e-9);
    const double weight = log_uniform(rng, 1e-6, 1e-2);
    const double backlog = 20000.0 * unit(rng);
    const double arrival = 1200.0 * unit(rng);

    const double p = optimal_power(weight, backlog, arrival, c, gain);
    const GridMinimum g = power_grid_search(weight, backlog, arrival, gain, c, grid_points);
    record(grid, std::max(0.0, f1(p, weight, gain, c) - g.value));

    const double served = shannon_rate(p, gain, c.noise_power(), c.bandwidth) * c.slot_duration;
    record(feas, std::max({0.0, served - (backlog + arrival), -p, p - c.max_power}));

    const double cap = rate_cap_power(backlog, arrival, c.bandwidth, c.slot_duration, gain, c.noise_power());
    if (p > 0.0 && p < std::min(cap, c.max_power) * (1.0 - 1e-12)) record(kkt, std::abs(f1_slope(p, weight, gain, c)));
  }
  close(grid);
  close(kkt);
  close(feas);
  return {grid, kkt, feas};
}

std::vector<CheckResult> check_fp_identities(const ScenarioConfig& c, int trials, Rng& rng) {
  CheckResult dual{"lagrange dual transform at eta = gamma", true, 0.0, 1e-9, 0, "relative to f2"};
  CheckResult golden{"golden-section eta equals gamma", true, 0.0, 1e-4, 0, "|eta* - gamma| / max(1, gamma)"};
  CheckResult quad{"quadratic transform at optimal zeta", true, 0.0, 1e-9, 0, "relative to the ratio sum"};
  CheckResult stat{"zeta stationarity", true, 0.0, 1e-6, 0, "finite-difference gradient, relative"};
  CheckResult expand{"quadratic expansion", true, 0.0, 1e-9, 0, "-v'Wv + 2Re v'q + C vs direct surrogate"};
  CheckResult herm{"W hermitian", true, 0.0, 1e-12, 0, "max |W - W^H|"};
  CheckResult sweep{"coordinate sweep ascent", true, 0.0, 1e-9, 0, "decrease of f4a, relative"};
  CheckResult ascent{"fp utility ascent", true, 0.0, 1e-9, 0, "decrease of f2 across iterations, relative"};
  CheckResult eta{"optimal eta", true, 0.0, 0.0, 0, "update_eta differs from gamma"};

  const double s2 = c.noise_power();
  for (int i = 0; i < trials; ++i) {
    const SlotInstance inst = random_slot_instance(c, rng);
    const auto K = inst.weight.size();
    std::vector<double> power(K);
    for (auto& p : power) p = log_uniform(rng, 1e-6, c.max_power);
    const auto v = random_unit(static_cast<std::size_t>(inst.channel.num_elements()), rng);
    const CVector ve = to_eigen(v);
    const PhaseProblem problem{power, inst.weight, &inst.channel, s2, c.bandwidth};

    // gamma from the oracle channel, eta from the implementation
    const auto h = effective_channel(inst.channel, v);
    std::vector<double> gamma(K);
    for (std::size_t k = 0; k < K; ++k) gamma[k] = power[k] * std::norm(h[k]) / s2;
    const auto eta_impl = update_eta(gamma);
    double eta_gap = 0.0;
    for (std::size_t k = 0; k < K; ++k) eta_gap = std::max(eta_gap, std::abs(eta_impl[k] - gamma[k]));
    record(eta, eta_gap);

    const double f2_ref = f2(power, inst.weight, inst.channel, v, s2, c.bandwidth);
    record(dual, rel_gap(lagrange_dual_objective(problem, eta_impl, ve), f2_ref));

    for (std::size_t k = 0; k < K; ++k) {
      const double g = gamma[k];
      const double best = golden_section_max([g](double e) { return dual_rhs(e, g); }, 0.0, 10.0 * g + 1.0, 1e-12);
      record(golden, std::abs(best - g) / std::max(1.0, g));
    }

    const auto eta_tilde = scaled_weights(inst.weight, eta_impl, c.bandwidth);
    const CVector zeta = update_zeta(power, eta_tilde, inst.channel, ve, s2);
    const auto zeta_std = to_std(zeta);
    const double ratio_ref = ratio_sum(power, eta_tilde, inst.channel, v, s2);
    record(quad, rel_gap(quadratic_surrogate(power, eta_tilde, zeta_std, inst.channel, v, s2), ratio_ref));
    record(quad, rel_gap(quadratic_transform_objective(power, eta_tilde, zeta, inst.channel, ve, s2), ratio_ref));

    for (std::size_t k = 0; k < K; ++k) {
      const double scale = 2.0 * std::sqrt(eta_tilde[k] * power[k]) * std::abs(h[k]);
      if (scale == 0.0) continue;
      const double step = 1e-5 * std::max(std::abs(zeta_std[k]), 1e-300);
      for (cplx dir : {cplx(1, 0), cplx(0, 1)}) {
        auto zp = zeta_std, zm = zeta_std;
        zp[k] += step * dir;
        zm[k] -= step * dir;
        const double grad = (quadratic_surrogate(power, eta_tilde, zp, inst.channel, v, s2) -
                             quadratic_surrogate(power, eta_tilde, zm, inst.channel, v, s2)) /
                            (2.0 * step);
        record(stat, std::abs(grad) / scale);
      }
    }

    const QuadraticForm form = assemble_quadratic(power, eta_tilde, zeta, inst.channel, s2);
    record(herm, (form.W - form.W.adjoint()).cwiseAbs().maxCoeff());
    const auto other = random_unit(v.size(), rng);
    const double direct = quadratic_surrogate(power, eta_tilde, zeta_std, inst.channel, other, s2);
    record(expand, rel_gap(quadratic_form(form.W, form.q, form.C, other), direct));
    record(expand, rel_gap(form.value(to_eigen(other)), direct));

    // Sweeps on the assembled form and on a random PSD form.
    const PhaseVector start = PhaseVector::random(inst.channel.num_elements(), c.phase_bits, rng);
    auto sweep_gap = [&](const CMatrix& W, const CVector& q, double C) {
      const QuadraticForm f{W, q, C};
      const PhaseVector next = coordinate_sweep(f, start);
      const double before = quadratic_form(W, q, C, phase_values(start.indices(), c.phase_bits));
      const double after = quadratic_form(W, q, C, phase_values(next.indices(), c.phase_bits));
      return std::max(0.0, before - after) / std::max(std::abs(before), 1e-300);
    };
    record(sweep, sweep_gap(form.W, form.q, form.C));
    const Eigen::Index n = inst.channel.num_elements();
    const CMatrix X = random_matrix(n, n, rng);
    record(sweep, sweep_gap(X * X.adjoint(), random_matrix(n, 1, rng), 0.0));

    const PhaseDesign design = design_phases(problem, start, c.solver.tolerance, c.solver.max_inner);
    double drop = 0.0;
    for (std::size_t j = 1; j < design.utility_trace.size(); ++j)
      drop = std::max(drop, (design.utility_trace[j - 1] - design.utility_trace[j]) /
                                std::max(std::abs(design.utility_trace[j - 1]), 1e-300));
    record(ascent, drop);
  }
  for (auto* r : {&dual, &golden, &quad, &stat, &expand, &herm, &sweep, &ascent, &eta}) close(*r);
  return {eta, dual, golden, quad, stat, expand, herm, sweep, ascent};
}

CheckResult check_discrete_phase(int trials, Rng& rng) {
  CheckResult r{"discrete phase vs enumeration", true, 0.0, 0.0, 0, "count of disagreements"};
  std::uniform_int_distribution<int> bits(1, 6);
  std::normal_distribution<double> normal;
  int mismatches = 0;
  for (int i = 0; i < trials; ++i) {
    const cplx d(normal(rng), normal(rng));
    const int b = bits(rng);
    if (best_discrete_phase(d, b) != best_level_by_enumeration(d, b)) ++mismatches;
    ++r.trials;
  }
  r.worst = mismatches;
  close(r);
  return r;
}

CheckResult check_cascade(const ScenarioConfig& c, int trials, Rng& rng) {
  CheckResult r{"cascade equivalence", true, 0.0, 1e-12, 0, "stacked vs per-surface channel, relative"};
  for (int i = 0; i < trials; ++i) {
    const Deployment dep = make_deployment(c, rng);
    const ChannelModel model(c, dep);
    const LinkSamples links = model.draw_links(rng);
    const ChannelSlot slot = model.assemble(links, 1);
    const auto v = random_unit(static_cast<std::size_t>(slot.num_elements()), rng);
    const CVector stacked = effective_channels(slot, to_eigen(v));
    const std::size_t per = static_cast<std::size_t>(c.elements_per_irs());
    for (int k = 0; k < slot.num_devices(); ++k) {
      // Surface-by-surface sum written from the link samples.
      cplx ref = links.direct(k);
      for (std::size_t m = 0; m < links.bs_irs.size(); ++m)
        for (std::size_t n = 0; n < per; ++n)
          ref += std::conj(v[m * per + n]) * links.irs_device[m][static_cast<std::size_t>(k)](static_cast<Eigen::Index>(n)) *
                 links.bs_irs[m](static_cast<Eigen::Index>(n));
      const double scale = std::max(std::abs(ref), 1e-300);
      record(r, std::abs(stacked(k) - ref) / scale);
      record(r, std::abs(effective_channel_per_surface(links, k, v) - ref) / scale);
    }
  }
  close(r);
  return r;
}

std::vector<CheckResult> check_slot_optimality(const ScenarioConfig& c, int trials, double max_gap, Rng& rng) {
  const std::uint64_t size = enumeration_size(c.total_elements(), c.phase_bits);
  if (size > c.enumeration_budget)
    throw EnumerationBudgetError("oracle enumeration needs " + std::to_string(size) + " candidates, budget is " +
                                 std::to_string(c.enumeration_budget));
  CheckResult gap{"alternating solver vs exhaustive search", true, 0.0, max_gap, 0, "(solve - optimum)/|optimum|"};
  CheckResult ex{"exhaustive search vs independent enumeration", true, 0.0, 1e-8, 0, "relative"};
  CheckResult feas{"committed decision feasibility", true, 0.0, 1e-9, 0, "rate-cap or power-bound violation, bits"};
  double gap_sum = 0.0;
  int over = 0;
  for (int i = 0; i < trials; ++i) {
    const SlotInstance inst = random_slot_instance(c, rng);
    const SlotProblem problem = inst.problem(c);
    const SlotDecision solved = solve_slot(problem, c.solver, PhaseVector(inst.channel.num_elements(), c.phase_bits));
    const SlotDecision best = exhaustive_slot(problem, c.enumeration_budget);
    const double reference = slot_exhaustive(inst.weight, inst.backlog, inst.arrival, inst.channel, c);
    const double g = std::max(0.0, solved.objective - reference) / std::max(std::abs(reference), 1e-300);
    record(gap, g);
    gap_sum += g;
    if (g > max_gap) ++over;
    record(ex, rel_gap(best.objective, reference));

    const auto h = effective_channel(inst.channel, phase_values(solved.phases.indices(), c.phase_bits));
    double violation = 0.0;
    for (std::size_t k = 0; k < h.size(); ++k) {
      const double bits = shannon_rate(solved.power[k], std::norm(h[k]), c.noise_power(), c.bandwidth) * c.slot_duration;
      violation = std::max({violation, bits - inst.backlog[k] - inst.arrival[k], -solved.power[k],
                            solved.power[k] - c.max_power});
    }
    record(feas, violation);
  }
  close(gap);
  close(ex);
  close(feas);
  char summary[128];
  std::snprintf(summary, sizeof summary, ", mean %.3g, %d of %d above tolerance", trials ? gap_sum / trials : 0.0, over,
                trials);
  gap.detail += summary;
  return {gap, ex, feas};
}

std::vector<CheckResult> run_suite(const ScenarioConfig& config, int trials, std::uint64_t seed) {
  std::vector<CheckResult> out;
  Rng rng(derive_seed(seed, 0x0a11));
  // Budget first so an oversized config is refused before any work.
  auto slot = check_slot_optimality(config, trials, 0.05, rng);
  auto power = check_power_control(config, trials, 100000, rng);
  auto fp = check_fp_identities(config, trials, rng);
  out.insert(out.end(), power.begin(), power.end());
  out.insert(out.end(), fp.begin(), fp.end());
  out.push_back(check_discrete_phase(10 * trials, rng));
  out.push_back(check_cascade(config, trials, rng));
  out.insert(out.end(), slot.begin(), slot.end());
  return out;
}

}  // namespace irsopt::oracle
