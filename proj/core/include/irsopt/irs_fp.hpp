#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "irsopt/channel.hpp"

namespace irsopt {

/// Discrete reflection phases, one level index in [0, 2^bits) per element.
/// Element n reflects with v_n = exp(j * index_n * 2pi / 2^bits).
class PhaseVector {
 public:
  PhaseVector() = default;
  PhaseVector(int num_elements, int bits);
  PhaseVector(std::vector<int> indices, int bits);

  int size() const { return static_cast<int>(indices_.size()); }
  int bits() const { return bits_; }
  int levels() const { return 1 << bits_; }
  double step() const;

  int index(int n) const { return indices_[static_cast<std::size_t>(n)]; }
  void set_index(int n, int level);
  const std::vector<int>& indices() const { return indices_; }

  cdouble value(int n) const;
  CVector values() const;

  static PhaseVector random(int num_elements, int bits, Rng& rng);

  friend bool operator==(const PhaseVector&, const PhaseVector&) = default;

 private:
  std::vector<int> indices_;
  int bits_ = 1;
};

/// Everything the phase subproblem needs about one slot.
struct PhaseProblem {
  std::span<const double> power;   // p_k, fixed
  std::span<const double> weight;  // omega_k
  const ChannelSlot* channel = nullptr;
  double noise_power = 0.0;
  double bandwidth = 0.0;
};

/// -v^H W v + 2 Re{v^H q} + C, the quadratic-transform surrogate at fixed
/// auxiliaries.
struct QuadraticForm {
  CMatrix W;
  CVector q;
  double C = 0.0;

  double value(const CVector& v) const;
};

/// Auxiliaries of the transforms.
struct FpState {
  std::vector<double> eta;
  CVector zeta;
  QuadraticForm form;
};

/// p |h_d + v^H h_c|^2 / sigma^2 per device.
std::vector<double> sinr(std::span<const double> power, const ChannelSlot& channel, const CVector& v,
                         double noise_power);

/// Optimal Lagrange-dual auxiliary, eta = gamma.
std::vector<double> update_eta(std::span<const double> gamma);

/// eta~_k = omega_k * B * (1 + eta_k)
std::vector<double> scaled_weights(std::span<const double> weight, std::span<const double> eta, double bandwidth);

/// zeta_k = sqrt(eta~_k p_k) h_k / (p_k |h_k|^2 + sigma^2) with h_k the effective channel.
CVector update_zeta(std::span<const double> power, std::span<const double> eta_tilde,
                    const ChannelSlot& channel, const CVector& v, double noise_power);

QuadraticForm assemble_quadratic(std::span<const double> power, std::span<const double> eta_tilde,
                                 const CVector& zeta, const ChannelSlot& channel, double noise_power);

/// Level maximizing cos(arg(d) - l*step). Ties go to the smaller index; a
/// zero `direction` keeps `current`.
int best_discrete_phase(cdouble direction, int bits, int current = 0);

/// One Gauss-Seidel pass over all elements in order; each element moves to
/// the level aligned with q_n - sum_{j != n} W[n, j] v_j.
PhaseVector coordinate_sweep(const QuadraticForm& form, const PhaseVector& v);

// Objectives used to monitor the transforms.

/// sum_k omega~_k log2(1 + gamma_k), omega~ = omega * B.
double rate_utility(const PhaseProblem& problem, const CVector& v);

/// Right-hand side of the Lagrange dual transform for one device, in log2
/// units: log2(1+eta) - eta + (1+eta) gamma / (1+gamma).
double lagrange_dual_term(double eta, double gamma);

/// sum_k omega~_k * lagrange_dual_term(eta_k, gamma_k(v)).
double lagrange_dual_objective(const PhaseProblem& problem, std::span<const double> eta, const CVector& v);

/// sum_k eta~_k p_k |h_k|^2 / (p_k |h_k|^2 + sigma^2)
double ratio_objective(std::span<const double> power, std::span<const double> eta_tilde,
                       const ChannelSlot& channel, const CVector& v, double noise_power);

/// Quadratic-transform surrogate of ratio_objective for given zeta.
double quadratic_transform_objective(std::span<const double> power, std::span<const double> eta_tilde,
                                     const CVector& zeta, const ChannelSlot& channel, const CVector& v,
                                     double noise_power);

struct PhaseDesign {
  PhaseVector phases;
  int iterations = 0;
  std::vector<double> utility_trace;  // rate_utility before the first and after every iteration
};

/// Alternates the Lagrange dual, quadratic transform and coordinate sweep
/// until the reflection vector stops moving (|dv|^2 < tolerance) or
/// `max_iterations` passes have run.
PhaseDesign design_phases(const PhaseProblem& problem, const PhaseVector& initial, double tolerance,
                          int max_iterations);

}  // namespace irsopt
