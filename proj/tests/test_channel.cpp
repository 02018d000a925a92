#include <doctest.h>

#include <cmath>
#include <numbers>

#include "irsopt/channel.hpp"
#include "irsopt/oracles.hpp"

using namespace irsopt;

namespace {
ChannelParams link(double rician, double exponent, double l0 = 1e-3) { return {rician, exponent, l0, 1.0}; }
}  // namespace

TEST_CASE("path loss") {
  const ChannelParams p = link(1.0, 2.2);
  CHECK(pathloss(p, 1.0) == doctest::Approx(1e-3));
  CHECK(pathloss(p, 10.0) == doctest::Approx(1e-3 * std::pow(10.0, -2.2)).epsilon(1e-12));
  CHECK(pathloss(p, 10.0) == doctest::Approx(6.31e-6).epsilon(1e-3));
  double last = pathloss(p, 0.5);
  for (double d = 1.0; d < 500.0; d *= 1.7) {
    CHECK(pathloss(p, d) < last);
    last = pathloss(p, d);
  }
  CHECK_THROWS_AS(pathloss(p, 0.0), GeometryError);
  CHECK_THROWS_AS(pathloss(p, -3.0), GeometryError);
}

TEST_CASE("steering vectors") {
  CHECK(los_steering(1, 1, 0.3, 1.1).size() == 1);
  CHECK(std::abs(los_steering(1, 1, 0.3, 1.1)(0) - cdouble(1, 0)) < 1e-15);

  const CVector broadside = los_steering(4, 4, std::numbers::pi / 2, std::numbers::pi / 2);
  REQUIRE(broadside.size() == 16);
  for (Eigen::Index i = 0; i < broadside.size(); ++i) CHECK(std::abs(broadside(i) - cdouble(1, 0)) < 1e-14);  // cos(pi/2) is 6e-17, not 0

  Rng rng(3);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  for (int rep = 0; rep < 100; ++rep) {
    const CVector a = los_steering(5, 3, angle(rng), angle(rng));
    REQUIRE(a.size() == 15);
    for (Eigen::Index i = 0; i < a.size(); ++i) CHECK(std::abs(a(i)) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("steering vector is a Kronecker product") {
  const double az = 0.7, el = 1.2;
  const CVector a = los_steering(3, 2, az, el);
  const CVector ax = los_steering(3, 1, az, el);
  // a_y alone: with N_x = 1 only the y-phase progression remains.
  const CVector ay = los_steering(1, 2, az, el);
  for (int ix = 0; ix < 3; ++ix)
    for (int iy = 0; iy < 2; ++iy) CHECK(std::abs(a(ix * 2 + iy) - ax(ix) * ay(iy)) < 1e-14);
  const double psi = std::numbers::pi * std::cos(el);
  const double chi = std::numbers::pi * std::sin(el) * std::cos(az);
  CHECK(std::abs(ax(1) - std::polar(1.0, psi)) < 1e-14);
  CHECK(std::abs(ay(1) - std::polar(1.0, chi)) < 1e-14);
}

TEST_CASE("pure line-of-sight limit") {
  Rng rng(11);
  const ChannelParams p = link(1e12, 2.2);
  const CVector los = los_steering(4, 2, 0.4, 0.9);
  const CVector h = draw_link(p, 30.0, los, rng);
  const double amp = std::sqrt(pathloss(p, 30.0));
  for (Eigen::Index i = 0; i < h.size(); ++i) CHECK(std::abs(h(i) - amp * los(i)) < 1e-5 * amp);
}

TEST_CASE("Rayleigh and Rician power normalization") {
  for (double rician : {0.0, 0.5, 1.0}) {
    Rng rng(5);
    const ChannelParams p = link(rician, 3.5);
    const CVector los = CVector::Constant(1, cdouble(1, 0));
    double power = 0.0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) power += std::norm(draw_link(p, 150.0, los, rng)(0));
    CHECK(power / draws == doctest::Approx(pathloss(p, 150.0)).epsilon(0.02));
  }
}

TEST_CASE("draws are deterministic") {
  const ChannelParams p = link(1.0, 2.2);
  const CVector los = los_steering(2, 2, 0.1, 0.2);
  Rng a(9), b(9);
  CHECK(draw_link(p, 10.0, los, a) == draw_link(p, 10.0, los, b));

  const ScenarioConfig c = default_scenario();
  Rng da(1), db(1);
  const Deployment dep_a = make_deployment(c, da), dep_b = make_deployment(c, db);
  Rng ca(2), cb(2);
  const ChannelSlot sa = generate_slot(c, dep_a, ca, 1), sb = generate_slot(c, dep_b, cb, 1);
  CHECK(sa.direct == sb.direct);
  CHECK(sa.cascaded == sb.cascaded);
}

TEST_CASE("slot shapes") {
  const ScenarioConfig c = default_scenario();
  Rng rng(4);
  const Deployment dep = make_deployment(c, rng);
  const ChannelSlot s = generate_slot(c, dep, rng, 7);
  CHECK(s.slot == 7);
  CHECK(s.direct.size() == c.num_devices);
  CHECK(s.cascaded.rows() == c.total_elements());
  CHECK(s.cascaded.cols() == c.num_devices);
  CHECK(s.cascaded.allFinite());
}

TEST_CASE("no surfaces") {
  ScenarioConfig c = default_scenario();
  c.num_irs = 0;
  Rng rng(4);
  const Deployment dep = make_deployment(c, rng);
  const ChannelSlot s = generate_slot(c, dep, rng, 1);
  CHECK(s.cascaded.rows() == 0);
  const CVector h = effective_channels(s, CVector(0));
  CHECK(h == s.direct);
}

TEST_CASE("cascade equivalence against the surface-by-surface sum") {
  const ScenarioConfig c = default_scenario();
  Rng rng(17);
  for (int rep = 0; rep < 100; ++rep) {
    const Deployment dep = make_deployment(c, rng);
    const ChannelModel model(c, dep);
    const LinkSamples links = model.draw_links(rng);
    const ChannelSlot slot = model.assemble(links, rep);
    std::vector<cdouble> v(static_cast<std::size_t>(slot.num_elements()));
    std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
    for (auto& x : v) x = std::polar(1.0, angle(rng));
    CVector ve(slot.num_elements());
    for (int n = 0; n < slot.num_elements(); ++n) ve(n) = v[static_cast<std::size_t>(n)];

    const CVector stacked = effective_channels(slot, ve);
    const auto loops = oracle::effective_channel(slot, v);
    for (int k = 0; k < c.num_devices; ++k) {
      const cdouble per_surface = effective_channel_per_surface(links, k, v);
      const double scale = std::abs(per_surface);
      CHECK(std::abs(stacked(k) - per_surface) <= 1e-12 * scale);
      CHECK(std::abs(loops[static_cast<std::size_t>(k)] - per_surface) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("all-zero phases add the reflected paths unrotated") {
  const ScenarioConfig c = tiny_scenario();
  Rng rng(8);
  const Deployment dep = make_deployment(c, rng);
  const ChannelSlot s = generate_slot(c, dep, rng, 1);
  const CVector h = effective_channels(s, CVector::Ones(s.num_elements()));
  for (int k = 0; k < s.num_devices(); ++k) CHECK(std::abs(h(k) - (s.direct(k) + s.cascaded.col(k).sum())) < 1e-20);
}
