#include "irsopt/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace irsopt::oracle {

double noise_power_from_dbm(double density_dbm_per_hz, double bandwidth) {
  return std::pow(10.0, density_dbm_per_hz / 10.0) * 1e-3 * bandwidth;
}

double shannon_rate(double power, double gain, double noise_power, double bandwidth) {
  return bandwidth * std::log(1.0 + power * gain / noise_power) / std::numbers::ln2;
}

double f1(double power, double weight, double gain, const ScenarioConfig& c) {
  return -weight * shannon_rate(power, gain, c.noise_power(), c.bandwidth) + c.control_param * power;
}

double rate_cap_by_bisection(double backlog, double arrival, double gain, const ScenarioConfig& c) {
  const double bits = backlog + arrival;
  auto served = [&](double p) { return shannon_rate(p, gain, c.noise_power(), c.bandwidth) * c.slot_duration; };
  if (served(c.max_power) <= bits) return c.max_power;
  double lo = 0.0, hi = c.max_power;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (served(mid) <= bits ? lo : hi) = mid;
  }
  return lo;
}

GridMinimum power_grid_search(double weight, double backlog, double arrival, double gain, const ScenarioConfig& c,
                              int points) {
  GridMinimum best;
  best.upper = rate_cap_by_bisection(backlog, arrival, gain, c);
  best.value = std::numeric_limits<double>::infinity();
  for (int i = 0; i < points; ++i) {
    const double p = best.upper * i / (points - 1);
    const double value = f1(p, weight, gain, c);
    if (value < best.value) {
      best.value = value;
      best.power = p;
    }
  }
  return best;
}

double f1_slope(double power, double weight, double gain, const ScenarioConfig& c) {
  return c.control_param - weight * c.bandwidth / (std::numbers::ln2 * (power + c.noise_power() / gain));
}

double f1_derivative(double power, double weight, double gain, const ScenarioConfig& c, double step) {
  if (step <= 0.0) step = std::max(1e-7 * std::abs(power), 1e-14);
  return (f1(power + step, weight, gain, c) - f1(power - step, weight, gain, c)) / (2.0 * step);
}

double golden_section_max(const std::function<double(double)>& f, double lo, double hi, double tol) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - r * (b - a), x2 = a + r * (b - a);
  double f1v = f(x1), f2v = f(x2);
  while (b - a > tol * std::max(1.0, std::abs(a) + std::abs(b))) {
    if (f1v < f2v) {
      a = x1;
      x1 = x2;
      f1v = f2v;
      x2 = a + r * (b - a);
      f2v = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2v = f1v;
      x1 = b - r * (b - a);
      f1v = f(x1);
    }
  }
  return 0.5 * (a + b);
}

double dual_rhs(double eta, double gamma) { return std::log(1.0 + eta) - eta + (1.0 + eta) * gamma / (1.0 + gamma); }

std::vector<cplx> effective_channel(const ChannelSlot& slot, const std::vector<cplx>& v) {
  const auto K = static_cast<std::size_t>(slot.direct.size());
  const auto N = static_cast<std::size_t>(slot.cascaded.rows());
  if (v.size() != N) throw std::invalid_argument("reflection length mismatch");
  std::vector<cplx> h(K);
  for (std::size_t k = 0; k < K; ++k) {
    cplx acc = slot.direct(static_cast<Eigen::Index>(k));
    for (std::size_t n = 0; n < N; ++n)
      acc += std::conj(v[n]) * slot.cascaded(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
    h[k] = acc;
  }
  return h;
}

std::vector<cplx> phase_values(const std::vector<int>& indices, int bits) {
  std::vector<cplx> v(indices.size());
  const double step = 2.0 * std::numbers::pi / std::pow(2.0, bits);
  for (std::size_t n = 0; n < v.size(); ++n) v[n] = {std::cos(indices[n] * step), std::sin(indices[n] * step)};
  return v;
}

double f2(const std::vector<double>& power, const std::vector<double>& weight, const ChannelSlot& slot,
          const std::vector<cplx>& v, double noise_power, double bandwidth) {
  const auto h = effective_channel(slot, v);
  double total = 0.0;
  for (std::size_t k = 0; k < h.size(); ++k)
    total += weight[k] * shannon_rate(power[k], std::norm(h[k]), noise_power, bandwidth);
  return total;
}

double ratio_sum(const std::vector<double>& power, const std::vector<double>& coeff, const ChannelSlot& slot,
                 const std::vector<cplx>& v, double noise_power) {
  const auto h = effective_channel(slot, v);
  double total = 0.0;
  for (std::size_t k = 0; k < h.size(); ++k) {
    const double s = power[k] * std::norm(h[k]);
    total += coeff[k] * s / (s + noise_power);
  }
  return total;
}

double quadratic_surrogate(const std::vector<double>& power, const std::vector<double>& coeff,
                           const std::vector<cplx>& zeta, const ChannelSlot& slot, const std::vector<cplx>& v,
                           double noise_power) {
  const auto h = effective_channel(slot, v);
  double total = 0.0;
  for (std::size_t k = 0; k < h.size(); ++k) {
    total += 2.0 * std::sqrt(coeff[k] * power[k]) * (std::conj(zeta[k]) * h[k]).real() -
             std::norm(zeta[k]) * (power[k] * std::norm(h[k]) + noise_power);
  }
  return total;
}

double quadratic_form(const CMatrix& W, const CVector& q, double C, const std::vector<cplx>& v) {
  const auto n = v.size();
  cplx quad = 0.0, lin = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    lin += std::conj(v[i]) * q(static_cast<Eigen::Index>(i));
    for (std::size_t j = 0; j < n; ++j)
      quad += std::conj(v[i]) * W(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * v[j];
  }
  return -quad.real() + 2.0 * lin.real() + C;
}

int best_level_by_enumeration(cplx d, int bits) {
  const int levels = 1 << bits;
  const double angle = std::arg(d);
  int best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (int l = 0; l < levels; ++l) {
    const double score = std::cos(angle - 2.0 * std::numbers::pi * l / levels);
    if (score > best_score) {
      best_score = score;
      best = l;
    }
  }
  return best;
}

namespace {

// Calls `visit` with every index vector of length n over `levels` values.
template <class Visit>
void for_each_phase(std::size_t n, int levels, Visit&& visit) {
  std::vector<int> idx(n, 0);
  while (true) {
    visit(idx);
    std::size_t i = 0;
    while (i < n && ++idx[i] == levels) idx[i++] = 0;
    if (i == n) return;
  }
}

}  // namespace

PhaseOptimum f2_exhaustive(const std::vector<double>& power, const std::vector<double>& weight,
                           const ChannelSlot& slot, int bits, double noise_power, double bandwidth) {
  PhaseOptimum best;
  best.value = -std::numeric_limits<double>::infinity();
  for_each_phase(static_cast<std::size_t>(slot.cascaded.rows()), 1 << bits, [&](const std::vector<int>& idx) {
    const double value = f2(power, weight, slot, phase_values(idx, bits), noise_power, bandwidth);
    if (value > best.value) {
      best.value = value;
      best.indices = idx;
    }
  });
  return best;
}

double slot_objective(const std::vector<double>& power, const std::vector<double>& weight, const ChannelSlot& slot,
                      const std::vector<cplx>& v, const ScenarioConfig& c) {
  const auto h = effective_channel(slot, v);
  double value = 0.0;
  double total = static_cast<double>(slot.cascaded.rows()) * c.element_power;
  for (std::size_t k = 0; k < h.size(); ++k) {
    value -= weight[k] * shannon_rate(power[k], std::norm(h[k]), c.noise_power(), c.bandwidth);
    total += power[k];
  }
  return value + c.control_param * total;
}

double slot_exhaustive(const std::vector<double>& weight, const std::vector<double>& backlog,
                       const std::vector<double>& arrival, const ChannelSlot& slot, const ScenarioConfig& c) {
  double best = std::numeric_limits<double>::infinity();
  for_each_phase(static_cast<std::size_t>(slot.cascaded.rows()), 1 << c.phase_bits, [&](const std::vector<int>& idx) {
    const auto v = phase_values(idx, c.phase_bits);
    const auto h = effective_channel(slot, v);
    std::vector<double> p(h.size());
    for (std::size_t k = 0; k < h.size(); ++k) {
      const double g = std::norm(h[k]);
      if (g == 0.0) continue;
      const double upper = rate_cap_by_bisection(backlog[k], arrival[k], g, c);
      const auto neg = [&](double x) { return -f1(x, weight[k], g, c); };
      const double x = golden_section_max(neg, 0.0, upper, 1e-13);
      // Golden section cannot land on an endpoint; compare against both.
      p[k] = x;
      if (f1(0.0, weight[k], g, c) <= f1(p[k], weight[k], g, c)) p[k] = 0.0;
      if (f1(upper, weight[k], g, c) < f1(p[k], weight[k], g, c)) p[k] = upper;
    }
    best = std::min(best, slot_objective(p, weight, slot, v, c));
  });
  return best;
}

}  // namespace irsopt::oracle
