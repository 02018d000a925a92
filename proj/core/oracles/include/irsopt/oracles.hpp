#pragma once

// Reference computations written from the model equations with plain loops,
// grid searches and enumeration. Nothing here calls into the solver code it
// is meant to check; only the data containers are shared.

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "irsopt/channel.hpp"
#include "irsopt/config.hpp"

namespace irsopt::oracle {

using cplx = std::complex<double>;

/// sigma^2 from a density in dBm/Hz and a bandwidth in Hz.
double noise_power_from_dbm(double density_dbm_per_hz, double bandwidth);

double shannon_rate(double power, double gain, double noise_power, double bandwidth);

/// -w R(p) + V p for one device.
double f1(double power, double weight, double gain, const ScenarioConfig& config);

/// Largest power meeting R(p) tau <= Q + A, by bisection on the rate itself.
double rate_cap_by_bisection(double backlog, double arrival, double gain, const ScenarioConfig& config);

struct GridMinimum {
  double power = 0.0;
  double value = 0.0;
  double upper = 0.0;  // right end of the searched interval
};

/// Minimum of f1 over `points` evenly spaced powers on [0, min(cap, p_max)].
GridMinimum power_grid_search(double weight, double backlog, double arrival, double gain,
                              const ScenarioConfig& config, int points = 100000);

/// d f1 / dp written out by hand: V - w B / (ln2 (p + sigma^2/g)).
double f1_slope(double power, double weight, double gain, const ScenarioConfig& config);

/// Central difference of f1 with respect to p.
double f1_derivative(double power, double weight, double gain, const ScenarioConfig& config, double step = 0.0);

/// Argmax of a unimodal function on [lo, hi].
double golden_section_max(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-10);

/// log(1+eta) - eta + (1+eta) gamma/(1+gamma) in nats.
double dual_rhs(double eta, double gamma);

/// h_d + sum_n conj(v_n) h_c[n] per device, loop form.
std::vector<cplx> effective_channel(const ChannelSlot& slot, const std::vector<cplx>& v);

std::vector<cplx> phase_values(const std::vector<int>& indices, int bits);

/// sum_k w_k B log2(1 + p_k |h_k|^2 / sigma^2).
double f2(const std::vector<double>& power, const std::vector<double>& weight, const ChannelSlot& slot,
          const std::vector<cplx>& v, double noise_power, double bandwidth);

/// sum_k a_k p|h_k|^2 / (p|h_k|^2 + sigma^2)
double ratio_sum(const std::vector<double>& power, const std::vector<double>& coeff, const ChannelSlot& slot,
                 const std::vector<cplx>& v, double noise_power);

/// sum_k 2 sqrt(a_k p_k) Re{conj(z_k) h_k} - |z_k|^2 (p_k |h_k|^2 + sigma^2)
double quadratic_surrogate(const std::vector<double>& power, const std::vector<double>& coeff,
                           const std::vector<cplx>& zeta, const ChannelSlot& slot, const std::vector<cplx>& v,
                           double noise_power);

/// -v^H W v + 2 Re{v^H q} + C, double loop.
double quadratic_form(const CMatrix& W, const CVector& q, double C, const std::vector<cplx>& v);

/// Level maximizing cos(arg d - l * 2pi/2^b) by checking every level.
int best_level_by_enumeration(cplx d, int bits);

struct PhaseOptimum {
  std::vector<int> indices;
  double value = 0.0;
};

/// Global maximizer of f2 over all phase vectors.
PhaseOptimum f2_exhaustive(const std::vector<double>& power, const std::vector<double>& weight,
                           const ChannelSlot& slot, int bits, double noise_power, double bandwidth);

/// Per-slot objective -sum w R + V (sum p + static) for given powers and phases.
double slot_objective(const std::vector<double>& power, const std::vector<double>& weight, const ChannelSlot& slot,
                      const std::vector<cplx>& v, const ScenarioConfig& config);

/// Global minimum of the per-slot problem: every phase vector, each device's
/// power by golden section on its feasible interval.
double slot_exhaustive(const std::vector<double>& weight, const std::vector<double>& backlog,
                       const std::vector<double>& arrival, const ChannelSlot& slot, const ScenarioConfig& config);

}  // namespace irsopt::oracle
