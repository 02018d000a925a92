#include "irsopt/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace irsopt {

double pathloss(const ChannelParams& params, double d) {
  if (!(d > 0.0) || !std::isfinite(d)) throw GeometryError("link distance must be positive");
  return params.reference_loss * std::pow(d / params.reference_distance, -params.pathloss_exponent);
}

CVector los_steering(int nx, int ny, double azimuth, double elevation, double spacing_over_wavelength) {
  const double k = 2.0 * std::numbers::pi * spacing_over_wavelength;
  const double psi = k * std::cos(elevation);
  const double chi = k * std::sin(elevation) * std::cos(azimuth);
  CVector a(static_cast<Eigen::Index>(nx) * ny);
  for (int ix = 0; ix < nx; ++ix)
    for (int iy = 0; iy < ny; ++iy) a(ix * ny + iy) = std::polar(1.0, ix * psi + iy * chi);
  return a;
}

CVector draw_link(const ChannelParams& params, double d, const CVector& los, Rng& rng) {
  const double amplitude = std::sqrt(pathloss(params, d));
  const double eps = params.rician_factor;
  const double los_weight = std::sqrt(eps / (eps + 1.0));
  const double nlos_weight = std::sqrt(1.0 / (eps + 1.0));
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));

  CVector out(los.size());
  for (Eigen::Index i = 0; i < los.size(); ++i) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    out(i) = amplitude * (los_weight * los(i) + nlos_weight * cdouble(re, im));
  }
  return out;
}

ArrayAngles departure_angles(const IrsPose& pose, Vec3 direction) {
  const Vec3 u = normalized(direction);
  const double along_x = std::clamp(dot(u, pose.horizontal), -1.0, 1.0);
  return {std::atan2(dot(u, pose.normal), dot(u, pose.vertical)), std::acos(along_x)};
}

ChannelModel::ChannelModel(const ScenarioConfig& config, const Deployment& deployment)
    : links_(config.channel),
      num_irs_(static_cast<int>(deployment.irs.size())),
      num_devices_(static_cast<int>(deployment.devices.size())),
      elements_per_irs_(config.elements_per_irs()) {
  const int nx = config.elements_x;
  const int ny = config.elements_y;
  for (const auto& pose : deployment.irs) {
    bs_irs_distance_.push_back(distance(pose.position, deployment.bs));
    const auto to_bs = departure_angles(pose, deployment.bs - pose.position);
    bs_irs_los_.push_back(los_steering(nx, ny, to_bs.azimuth, to_bs.elevation));

    std::vector<double> dist;
    std::vector<CVector> los;
    for (const auto& dev : deployment.devices) {
      dist.push_back(distance(pose.position, dev));
      const auto to_dev = departure_angles(pose, dev - pose.position);
      los.push_back(los_steering(nx, ny, to_dev.azimuth, to_dev.elevation));
    }
    irs_device_distance_.push_back(std::move(dist));
    irs_device_los_.push_back(std::move(los));
  }
  for (const auto& dev : deployment.devices) direct_distance_.push_back(distance(dev, deployment.bs));
}

LinkSamples ChannelModel::draw_links(Rng& rng) const {
  LinkSamples s;
  s.bs_irs.reserve(static_cast<std::size_t>(num_irs_));
  s.irs_device.resize(static_cast<std::size_t>(num_irs_));
  for (int m = 0; m < num_irs_; ++m) {
    s.bs_irs.push_back(draw_link(links_.bs_irs, bs_irs_distance_[m], bs_irs_los_[m], rng));
    for (int k = 0; k < num_devices_; ++k)
      s.irs_device[m].push_back(
          draw_link(links_.irs_device, irs_device_distance_[m][k], irs_device_los_[m][k], rng));
  }
  const CVector unit_los = CVector::Ones(1);
  s.direct.resize(num_devices_);
  for (int k = 0; k < num_devices_; ++k)
    s.direct(k) = draw_link(links_.bs_device, direct_distance_[k], unit_los, rng)(0);
  return s;
}

ChannelSlot ChannelModel::assemble(const LinkSamples& links, std::int64_t slot) const {
  ChannelSlot out;
  out.slot = slot;
  out.direct = links.direct;
  out.cascaded.resize(num_elements(), num_devices_);
  for (int m = 0; m < num_irs_; ++m)
    for (int k = 0; k < num_devices_; ++k)
      out.cascaded.block(m * elements_per_irs_, k, elements_per_irs_, 1) =
          links.irs_device[m][k].cwiseProduct(links.bs_irs[m]);
  return out;
}

ChannelSlot generate_slot(const ScenarioConfig& config, const Deployment& deployment, Rng& rng,
                          std::int64_t slot) {
  return ChannelModel(config, deployment).draw(rng, slot);
}

CVector effective_channels(const ChannelSlot& slot, const CVector& reflection) {
  if (slot.num_elements() == 0) return slot.direct;
  return slot.direct + (reflection.adjoint() * slot.cascaded).transpose();
}

cdouble effective_channel_per_surface(const LinkSamples& links, int device,
                                      std::span<const cdouble> reflection) {
  cdouble h = links.direct(device);
  std::size_t n = 0;
  for (std::size_t m = 0; m < links.bs_irs.size(); ++m) {
    const CVector& f = links.bs_irs[m];
    const CVector& g = links.irs_device[m][static_cast<std::size_t>(device)];
    cdouble reflected{0.0, 0.0};
    for (Eigen::Index i = 0; i < f.size(); ++i, ++n) reflected += g(i) * std::conj(reflection[n]) * f(i);
    h += reflected;
  }
  return h;
}

}  // namespace irsopt
