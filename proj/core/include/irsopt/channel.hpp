#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "irsopt/config.hpp"

namespace irsopt {

using cdouble = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Linear power gain L0 * (distance / D0)^(-iota).
/// Throws GeometryError for a non-positive distance.
double pathloss(const ChannelParams& params, double distance);

/// Uniform planar array response a_x(elevation) (x) a_y(azimuth, elevation),
/// length nx*ny, x-index major.
CVector los_steering(int nx, int ny, double azimuth, double elevation,
                     double spacing_over_wavelength = 0.5);

/// One Rician draw: sqrt(pathloss) * (sqrt(e/(e+1)) * los + sqrt(1/(e+1)) * nlos)
/// with nlos entries CN(0, 1). The path loss multiplies amplitudes, so the
/// mean received power is pathloss(params, distance).
CVector draw_link(const ChannelParams& params, double distance, const CVector& los, Rng& rng);

/// Azimuth and elevation of `direction` in the local frame of `pose`.
struct ArrayAngles {
  double azimuth;
  double elevation;
};
ArrayAngles departure_angles(const IrsPose& pose, Vec3 direction);

/// Channels of one slot. Column k of `cascaded` is h_{c,k} = diag(g_k) f,
/// surfaces stacked in deployment order, so the effective channel is
/// h_d + v^H h_{c,k}.
struct ChannelSlot {
  CVector direct;    // K
  CMatrix cascaded;  // MN x K
  std::int64_t slot = 0;

  int num_devices() const { return static_cast<int>(direct.size()); }
  int num_elements() const { return static_cast<int>(cascaded.rows()); }
};

/// Per-slot link samples before cascading; kept for checks that assemble
/// the channel surface by surface.
struct LinkSamples {
  std::vector<CVector> bs_irs;                   // f_m, per surface
  std::vector<std::vector<CVector>> irs_device;  // g_{m,k}, [m][k]
  CVector direct;                                // h_{d,k}
};

/// Precomputes distances and LOS components for a fixed deployment; each
/// call to draw() redraws the NLOS parts.
class ChannelModel {
 public:
  ChannelModel(const ScenarioConfig& config, const Deployment& deployment);

  LinkSamples draw_links(Rng& rng) const;
  ChannelSlot assemble(const LinkSamples& links, std::int64_t slot) const;
  ChannelSlot draw(Rng& rng, std::int64_t slot) const { return assemble(draw_links(rng), slot); }

  int num_devices() const { return num_devices_; }
  int num_elements() const { return num_irs_ * elements_per_irs_; }

 private:
  LinkClasses links_;
  int num_irs_;
  int num_devices_;
  int elements_per_irs_;
  std::vector<double> bs_irs_distance_;
  std::vector<CVector> bs_irs_los_;
  std::vector<std::vector<double>> irs_device_distance_;
  std::vector<std::vector<CVector>> irs_device_los_;
  std::vector<double> direct_distance_;
};

ChannelSlot generate_slot(const ScenarioConfig& config, const Deployment& deployment, Rng& rng,
                          std::int64_t slot);

/// h_d + v^H h_c per device for unit-modulus reflection values v.
CVector effective_channels(const ChannelSlot& slot, const CVector& reflection);

/// Same quantity evaluated surface by surface, h_d + sum_m f_m^H Phi_m g_{m,k}.
cdouble effective_channel_per_surface(const LinkSamples& links, int device,
                                      std::span<const cdouble> reflection);

}  // namespace irsopt
