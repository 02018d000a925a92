#include "irsopt/irs_fp.hpp"

#include <cassert>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace irsopt {

PhaseVector::PhaseVector(int num_elements, int bits)
    : indices_(static_cast<std::size_t>(num_elements), 0), bits_(bits) {
  if (bits < 1 || bits > 16) throw std::invalid_argument("phase bits must lie in [1, 16]");
}

PhaseVector::PhaseVector(std::vector<int> indices, int bits) : indices_(std::move(indices)), bits_(bits) {
  if (bits < 1 || bits > 16) throw std::invalid_argument("phase bits must lie in [1, 16]");
  for (int i : indices_)
    if (i < 0 || i >= levels()) throw std::out_of_range("phase index outside [0, 2^bits)");
}

double PhaseVector::step() const { return 2.0 * std::numbers::pi / levels(); }

void PhaseVector::set_index(int n, int level) {
  if (level < 0 || level >= levels()) throw std::out_of_range("phase index outside [0, 2^bits)");
  indices_[static_cast<std::size_t>(n)] = level;
}

cdouble PhaseVector::value(int n) const { return std::polar(1.0, index(n) * step()); }

CVector PhaseVector::values() const {
  CVector v(size());
  for (int n = 0; n < size(); ++n) v(n) = value(n);
  return v;
}

PhaseVector PhaseVector::random(int num_elements, int bits, Rng& rng) {
  PhaseVector v(num_elements, bits);
  std::uniform_int_distribution<int> level(0, v.levels() - 1);
  for (auto& i : v.indices_) i = level(rng);
  return v;
}

double QuadraticForm::value(const CVector& v) const {
  if (v.size() == 0) return C;
  const double quad = v.dot(W * v).real();  // Eigen's dot conjugates the left operand
  const double lin = v.dot(q).real();
  return -quad + 2.0 * lin + C;
}

std::vector<double> sinr(std::span<const double> power, const ChannelSlot& channel, const CVector& v,
                         double noise_power) {
  const CVector h = effective_channels(channel, v);
  std::vector<double> g(power.size());
  for (std::size_t k = 0; k < g.size(); ++k) g[k] = power[k] * std::norm(h(static_cast<Eigen::Index>(k))) / noise_power;
  return g;
}

std::vector<double> update_eta(std::span<const double> gamma) { return {gamma.begin(), gamma.end()}; }

std::vector<double> scaled_weights(std::span<const double> weight, std::span<const double> eta, double bandwidth) {
  std::vector<double> out(weight.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = weight[k] * bandwidth * (1.0 + eta[k]);
  return out;
}

CVector update_zeta(std::span<const double> power, std::span<const double> eta_tilde, const ChannelSlot& channel,
                    const CVector& v, double noise_power) {
  const CVector h = effective_channels(channel, v);
  CVector zeta(h.size());
  for (Eigen::Index k = 0; k < h.size(); ++k) {
    const double p = power[static_cast<std::size_t>(k)];
    zeta(k) = std::sqrt(eta_tilde[static_cast<std::size_t>(k)] * p) * h(k) / (p * std::norm(h(k)) + noise_power);
  }
  return zeta;
}

QuadraticForm assemble_quadratic(std::span<const double> power, std::span<const double> eta_tilde,
                                 const CVector& zeta, const ChannelSlot& channel, double noise_power) {
  const Eigen::Index n = channel.num_elements();
  const Eigen::Index K = channel.num_devices();
  QuadraticForm f;
  f.W = CMatrix::Zero(n, n);
  f.q = CVector::Zero(n);
  f.C = 0.0;
  for (Eigen::Index k = 0; k < K; ++k) {
    const double p = power[static_cast<std::size_t>(k)];
    const double a = std::sqrt(eta_tilde[static_cast<std::size_t>(k)] * p);
    const double z2p = std::norm(zeta(k)) * p;
    const cdouble hd = channel.direct(k);
    const auto hc = channel.cascaded.col(k);

    // Upper triangle plus mirror keeps W exactly Hermitian.
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = 0; i <= j; ++i) f.W(i, j) += z2p * hc(i) * std::conj(hc(j));
    }
    f.q += (a * std::conj(zeta(k)) - z2p * std::conj(hd)) * hc;
    f.C += 2.0 * a * (std::conj(zeta(k)) * hd).real() - std::norm(zeta(k)) * (p * std::norm(hd) + noise_power);
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    f.W(j, j) = cdouble(f.W(j, j).real(), 0.0);
    for (Eigen::Index i = 0; i < j; ++i) f.W(j, i) = std::conj(f.W(i, j));
  }
  return f;
}

int best_discrete_phase(cdouble direction, int bits, int current) {
  if (direction == cdouble(0.0, 0.0)) return current;
  const int levels = 1 << bits;
  const double step = 2.0 * std::numbers::pi / levels;
  const double angle = std::arg(direction);

  // The maximizer is one of the two levels bracketing arg(d); check the
  // rounded level and its neighbours exactly.
  const long nearest = std::lround(angle / step);
  int best = -1;
  double best_score = -2.0;
  for (long offset : {-1L, 0L, 1L}) {
    const int level = static_cast<int>(((nearest + offset) % levels + levels) % levels);
    const double score = std::cos(angle - level * step);
    if (score > best_score || (score == best_score && level < best)) {
      best_score = score;
      best = level;
    }
  }
  return best;
}

PhaseVector coordinate_sweep(const QuadraticForm& form, const PhaseVector& v) {
  PhaseVector out = v;
  const int n = v.size();
  if (n == 0) return out;
  CVector values = out.values();
  CVector wv = form.W * values;
  for (int i = 0; i < n; ++i) {
    const cdouble d = form.q(i) - (wv(i) - form.W(i, i) * values(i));
    const int level = best_discrete_phase(d, out.bits(), out.index(i));
    if (level == out.index(i)) continue;
    out.set_index(i, level);
    const cdouble updated = out.value(i);
    wv += form.W.col(i) * (updated - values(i));
    values(i) = updated;
  }
  return out;
}

double rate_utility(const PhaseProblem& problem, const CVector& v) {
  const auto gamma = sinr(problem.power, *problem.channel, v, problem.noise_power);
  double total = 0.0;
  for (std::size_t k = 0; k < gamma.size(); ++k) total += problem.weight[k] * problem.bandwidth * std::log2(1.0 + gamma[k]);
  return total;
}

double lagrange_dual_term(double eta, double gamma) {
  return (std::log1p(eta) - eta + (1.0 + eta) * gamma / (1.0 + gamma)) / std::numbers::ln2;
}

double lagrange_dual_objective(const PhaseProblem& problem, std::span<const double> eta, const CVector& v) {
  const auto gamma = sinr(problem.power, *problem.channel, v, problem.noise_power);
  double total = 0.0;
  for (std::size_t k = 0; k < gamma.size(); ++k)
    total += problem.weight[k] * problem.bandwidth * lagrange_dual_term(eta[k], gamma[k]);
  return total;
}

double ratio_objective(std::span<const double> power, std::span<const double> eta_tilde, const ChannelSlot& channel,
                       const CVector& v, double noise_power) {
  const CVector h = effective_channels(channel, v);
  double total = 0.0;
  for (Eigen::Index k = 0; k < h.size(); ++k) {
    const double s = power[static_cast<std::size_t>(k)] * std::norm(h(k));
    total += eta_tilde[static_cast<std::size_t>(k)] * s / (s + noise_power);
  }
  return total;
}

double quadratic_transform_objective(std::span<const double> power, std::span<const double> eta_tilde,
                                     const CVector& zeta, const ChannelSlot& channel, const CVector& v,
                                     double noise_power) {
  const CVector h = effective_channels(channel, v);
  double total = 0.0;
  for (Eigen::Index k = 0; k < h.size(); ++k) {
    const double p = power[static_cast<std::size_t>(k)];
    const double a = std::sqrt(eta_tilde[static_cast<std::size_t>(k)] * p);
    total += 2.0 * a * (std::conj(zeta(k)) * h(k)).real() - std::norm(zeta(k)) * (p * std::norm(h(k)) + noise_power);
  }
  return total;
}

PhaseDesign design_phases(const PhaseProblem& problem, const PhaseVector& initial, double tolerance,
                          int max_iterations) {
  assert(problem.channel != nullptr);
  const ChannelSlot& ch = *problem.channel;
  PhaseDesign out;
  out.phases = initial;
  CVector values = initial.values();
  out.utility_trace.push_back(rate_utility(problem, values));
  if (ch.num_elements() == 0) return out;

  for (int it = 1; it <= max_iterations; ++it) {
    // eta before zeta: zeta must be optimal for the eta~ that builds (W, q),
    // otherwise the sweep can lower the rate utility.
    const auto eta = update_eta(sinr(problem.power, ch, values, problem.noise_power));
    const auto eta_tilde = scaled_weights(problem.weight, eta, problem.bandwidth);
    const CVector zeta = update_zeta(problem.power, eta_tilde, ch, values, problem.noise_power);
    const QuadraticForm form = assemble_quadratic(problem.power, eta_tilde, zeta, ch, problem.noise_power);

    PhaseVector next = coordinate_sweep(form, out.phases);
    const CVector next_values = next.values();
    const double change = (next_values - values).squaredNorm();
    out.phases = std::move(next);
    values = next_values;
    out.iterations = it;
    out.utility_trace.push_back(rate_utility(problem, values));
    if (change < tolerance) break;
  }
  return out;
}

}  // namespace irsopt
