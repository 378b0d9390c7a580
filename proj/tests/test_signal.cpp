#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rirtrack/rng.hpp"
#include "rirtrack/signal_ops.hpp"
#include "rirtrack/types.hpp"

#include "oracles.hpp"

using namespace rirtrack;

namespace {
const SampleClock kClock(16000.0);

SourceSignal make_signal(std::vector<double> samples) {
  SourceSignal x;
  x.samples = std::move(samples);
  x.clock = kClock;
  return x;
}
}  // namespace

TEST_CASE("sample clock") {
  CHECK(kClock.period() * kClock.sample_rate == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(SampleClock(0.0), ConfigError);
  CHECK_THROWS_AS(SampleClock(-1.0), ConfigError);
}

TEST_CASE("regressor basics") {
  const SourceSignal x = make_signal({1, 2, 3});
  const Vec r = regressor(x, 2, 2);
  CHECK(r[0] == 3.0);
  CHECK(r[1] == 2.0);

  const Vec padded = regressor(make_signal({5}), 0, 3);
  CHECK(padded[0] == 5.0);
  CHECK(padded[1] == 0.0);
  CHECK(padded[2] == 0.0);

  const Vec shifted = regressor(make_signal({1, 0, 0, 0}), 3, 4);
  CHECK(shifted[0] == 0.0);
  CHECK(shifted[1] == 0.0);
  CHECK(shifted[2] == 0.0);
  CHECK(shifted[3] == 1.0);

  CHECK_THROWS_AS(regressor(x, 3, 2), IndexError);
  CHECK_THROWS_AS(regressor(x, -1, 2), IndexError);
}

TEST_CASE("convolve_observe basics") {
  SUBCASE("identity filter") {
    Rir h(Vec::Zero(3), kClock);
    h.taps[0] = 1.0;
    const SourceSignal impulse = make_signal({1, 0, 0});
    CHECK(convolve_observe(h, impulse, 0) == 1.0);
  }
  SUBCASE("one-tap delay") {
    Vec taps(2);
    taps << 0, 1;
    CHECK(convolve_observe(Rir(taps, kClock), make_signal({3, 4}), 1) == 3.0);
  }
  SUBCASE("hand dot product") {
    Vec taps(2);
    taps << 0.5, 0.25;
    CHECK(convolve_observe(Rir(taps, kClock), make_signal({2, 2}), 1) ==
          doctest::Approx(1.5).epsilon(1e-15));
  }
  SUBCASE("clock mismatch") {
    Rir h(Vec::Ones(2), SampleClock(48000.0));
    CHECK_THROWS_AS(convolve_observe(h, make_signal({1, 2}), 0), ConfigError);
  }
}

TEST_CASE("regressor + convolve_observe equal direct FIR convolution") {
  Rng rng(123);
  for (int trial = 0; trial < 5; ++trial) {
    const int total = 64;
    const int n = 9;
    std::vector<double> samples(total);
    for (double& s : samples) s = rng.gaussian();
    Vec taps(n);
    for (int i = 0; i < n; ++i) taps[i] = rng.gaussian();

    const SourceSignal x = make_signal(samples);
    const Rir h(taps, kClock);
    const std::vector<double> reference =
        oracles::naive_convolution(samples, std::vector<double>(taps.data(), taps.data() + n));

    for (int k = 0; k < total; ++k) {
      CHECK(std::abs(convolve_observe(h, x, k) - reference[k]) <= 1e-12);
      CHECK(std::abs(regressor(x, k, n).dot(taps) - reference[k]) <= 1e-12);
    }
  }
}

TEST_CASE("trajectory from waypoints keeps the segment invariants") {
  const std::vector<Point3> waypoints{{0, 0, 1}, {0.5, 0, 1}, {0.5, 0.25, 1}};
  const std::vector<double> speeds{8.0, 4.0};
  const Trajectory traj = Trajectory::from_waypoints(waypoints, speeds, kClock);

  traj.validate(kClock);
  REQUIRE(traj.segments.size() == 2);

  const Segment& first = traj.segments[0];
  const Segment& second = traj.segments[1];
  CHECK(first.l_start == 0);
  CHECK(second.l_start == first.l_end);
  CHECK(second.l_end == traj.total_locations() - 1);
  for (const Segment& seg : traj.segments) {
    CHECK(seg.n_locations == seg.l_end - seg.l_start + 1);
    CHECK(seg.spacing == doctest::Approx(seg.velocity * kClock.period()).epsilon(1e-9));
    CHECK(seg.length_m ==
          doctest::Approx((seg.n_locations - 1) * seg.spacing).epsilon(1e-9));
  }

  // Positions at the shared boundary match the middle waypoint.
  CHECK((traj.positions[first.l_end] - Point3(0.5, 0, 1)).norm() < 1e-12);

  CHECK_THROWS_AS(
      Trajectory::from_waypoints(std::vector<Point3>{{0, 0, 0}}, std::vector<double>{}, kClock),
      ConfigError);
}

TEST_CASE("rng reproducibility") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.gaussian() == b.gaussian());
  Rng c(43);
  bool differs = false;
  Rng a2(42);
  for (int i = 0; i < 10; ++i) differs |= (a2.gaussian() != c.gaussian());
  CHECK(differs);
}
