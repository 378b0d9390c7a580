#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rirtrack/dtw.hpp"
#include "rirtrack/ism.hpp"
#include "rirtrack/rng.hpp"
#include "rirtrack/signal_ops.hpp"
#include "rirtrack/transition.hpp"

#include <cmath>

using namespace rirtrack;

namespace {

const SampleClock kClock(16000.0);

ReflectionMapEstimate map_with(const std::vector<std::pair<double, ToaInterval>>& entries) {
  ReflectionMapEstimate map;
  for (const auto& [step, interval] : entries) {
    ReflectionEstimate est;
    est.step_seconds = step;
    est.interval = interval;
    map.reflections.push_back(est);
  }
  return map;
}

ToaInterval samples_interval(double lo, double hi) {
  return {lo * kClock.period(), hi * kClock.period()};
}

}  // namespace

TEST_CASE("reflection_sets coverage") {
  SUBCASE("one interval covers its samples inclusively") {
    const ReflectionCoverage cov =
        reflection_sets(map_with({{0.0, samples_interval(10, 14)}}), 32, kClock);
    for (int n = 0; n < 32; ++n) {
      if (n >= 10 && n <= 14) {
        REQUIRE(cov.covering[n].size() == 1);
        CHECK(cov.covering[n][0] == 0);
      } else {
        CHECK(cov.covering[n].empty());
      }
    }
    CHECK(cov.warnings.empty());
  }
  SUBCASE("disjoint intervals stay singleton") {
    const ReflectionCoverage cov = reflection_sets(
        map_with({{0.0, samples_interval(4, 6)}, {0.0, samples_interval(10, 12)}}), 16,
        kClock);
    CHECK(cov.covering[5] == std::vector<int>{0});
    CHECK(cov.covering[11] == std::vector<int>{1});
    CHECK(cov.covering[8].empty());
    CHECK(cov.warnings.empty());
  }
  SUBCASE("overlap produces a structured warning") {
    const ReflectionCoverage cov = reflection_sets(
        map_with({{0.0, samples_interval(10, 14)}, {0.0, samples_interval(13, 16)}}), 32,
        kClock);
    CHECK(cov.covering[13] == std::vector<int>{0, 1});
    CHECK(cov.covering[14] == std::vector<int>{0, 1});
    REQUIRE(cov.warnings.size() == 1);
    CHECK(cov.warnings[0].first == 0);
    CHECK(cov.warnings[0].second == 1);
    CHECK(cov.warnings[0].tap_lo == 13);
    CHECK(cov.warnings[0].tap_hi == 14);
  }
  SUBCASE("intervals beyond the tap range are clipped away") {
    const ReflectionCoverage cov =
        reflection_sets(map_with({{0.0, samples_interval(40, 50)}}), 32, kClock);
    for (int n = 0; n < 32; ++n) CHECK(cov.covering[n].empty());
  }
}

TEST_CASE("build_transition") {
  const int n = 32;

  SUBCASE("integer shift rows carry a single one") {
    const ReflectionCoverage cov =
        reflection_sets(map_with({{2.0 * kClock.period(), samples_interval(10, 20)}}), n,
                        kClock);
    const std::vector<double> steps{2.0 * kClock.period()};
    const TransitionMatrix a = build_transition(cov, steps, n, kClock);
    const Mat dense = a.dense();
    for (int row = 0; row < n; ++row) {
      if (row >= 10 && row <= 20) {
        for (int col = 0; col < n; ++col)
          CHECK(dense(row, col) == (col == row - 2 ? 1.0 : 0.0));
      } else {
        for (int col = 0; col < n; ++col)
          CHECK(dense(row, col) == (col == row ? 1.0 : 0.0));
      }
    }
    CHECK(a.covered_rows == std::vector<int>{10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20});
  }

  SUBCASE("fractional shift rows are sinc rows that sum to about one") {
    const double step = 0.5 * kClock.period();
    const ReflectionCoverage cov =
        reflection_sets(map_with({{step, samples_interval(10, 12)}}), n, kClock);
    const TransitionMatrix a = build_transition(cov, {&step, 1}, n, kClock);
    const Mat dense = a.dense();
    for (int row = 10; row <= 12; ++row) {
      double expected_sum = 0.0;
      for (int col = 0; col < n; ++col) {
        const double arg = row - 0.5 - col;
        const double expected = std::abs(arg) <= kTransitionHalfwidth ? sinc(arg) : 0.0;
        CHECK(dense(row, col) == doctest::Approx(expected).epsilon(1e-15));
        expected_sum += expected;
      }
      CHECK(dense.row(row).sum() == doctest::Approx(expected_sum).epsilon(1e-12));
      CHECK(std::abs(dense.row(row).sum() - 1.0) < 0.02);
    }
  }

  SUBCASE("no reflections gives the identity") {
    const ReflectionCoverage cov = reflection_sets(map_with({}), n, kClock);
    const TransitionMatrix a = build_transition(cov, {}, n, kClock);
    CHECK(a.dense().isIdentity(0.0));
    CHECK(a.covered_rows.empty());
  }

  SUBCASE("zero fill leaves uncovered rows empty") {
    const ReflectionCoverage cov =
        reflection_sets(map_with({{0.0, samples_interval(5, 8)}}), n, kClock);
    const std::vector<double> steps{0.0};
    const TransitionMatrix a =
        build_transition(cov, steps, n, kClock, FillMode::ZeroRows);
    const Mat dense = a.dense();
    CHECK(dense.row(0).cwiseAbs().sum() == 0.0);
    CHECK(dense(5, 5) == 1.0);
  }

  SUBCASE("coverage referencing an unknown reflection fails") {
    const ReflectionCoverage cov =
        reflection_sets(map_with({{0.0, samples_interval(5, 8)}}), n, kClock);
    CHECK_THROWS_AS(build_transition(cov, {}, n, kClock), ConfigError);
  }
}

TEST_CASE("shift fidelity for integer steps") {
  const int n = 64;
  const double step = 3.0 * kClock.period();
  const ReflectionCoverage cov =
      reflection_sets(map_with({{step, samples_interval(20, 40)}}), n, kClock);
  const TransitionMatrix a = build_transition(cov, {&step, 1}, n, kClock);

  Vec v = Vec::Zero(n);
  v[27] = 0.7;
  v[31] = -0.2;
  const Vec shifted = a.apply(v);
  Vec expected = Vec::Zero(n);
  expected[30] = 0.7;
  expected[34] = -0.2;
  CHECK((shifted - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("identity fill leaves uncovered samples unchanged") {
  const int n = 48;
  const double step = 1.0 * kClock.period();
  const ReflectionCoverage cov =
      reflection_sets(map_with({{step, samples_interval(30, 40)}}), n, kClock);
  const TransitionMatrix a = build_transition(cov, {&step, 1}, n, kClock);
  Rng rng(5);
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.gaussian();
  const Vec out = a.apply(v);
  for (int i = 0; i < n; ++i)
    if (i < 30 || i > 40) CHECK(out[i] == v[i]);
}

TEST_CASE("covariance propagation matches the dense product") {
  Rng rng(11);
  const int n = 40;
  const double step_a = 2.5 * kClock.period();
  const double step_b = -1.25 * kClock.period();
  const ReflectionCoverage cov = reflection_sets(
      map_with({{step_a, samples_interval(8, 14)}, {step_b, samples_interval(22, 30)}}), n,
      kClock);
  const std::vector<double> steps{step_a, step_b};

  for (FillMode fill : {FillMode::Identity, FillMode::ZeroRows}) {
    const TransitionMatrix a = build_transition(cov, steps, n, kClock, fill);
    Mat p = Mat::Random(n, n);
    p = (0.5 * (p + p.transpose())).eval();
    p.diagonal().array() += n;  // make it positive definite
    const Mat reference = a.dense() * p * a.dense().transpose();
    const Mat fast = a.propagate_covariance(p);
    CHECK((fast - reference).cwiseAbs().maxCoeff() <= 1e-10 * reference.norm());
  }
}

TEST_CASE("analytic transition from exact geometry") {
  const double ct = 343.0 * kClock.period();

  SUBCASE("radial motion gives step spacing/c") {
    // Microphone moving straight away from a far source.
    const int locations = 101;
    const double spacing = 8.0 * kClock.period();  // 8 m/s
    std::vector<Point3> positions;
    for (int l = 0; l < locations; ++l)
      positions.push_back(Point3(3.0 + spacing * l, 0.0, 0.0));

    ImageSourceSet set;
    ImageSource img;
    img.position = Point3(0, 0, 0);
    img.wall_gain = 1.0;
    set.sources.push_back(img);

    Segment seg;
    seg.index = 1;
    seg.l_start = 0;
    seg.l_end = locations - 1;
    seg.n_locations = locations;
    seg.velocity = 8.0;
    seg.spacing = spacing;
    seg.length_m = spacing * (locations - 1);

    const ReflectionMapEstimate map =
        analytic_reflection_map(set, seg, positions, kClock, 2.0 * kClock.period());
    REQUIRE(map.reflections.size() == 1);
    const double expected = spacing / 343.0;
    CHECK(std::abs(map.reflections[0].step_seconds - expected) <= 1e-3 * expected);
  }

  SUBCASE("static segment gives zero steps and identity on covered rows") {
    const int locations = 11;
    std::vector<Point3> positions(locations, Point3(2.0, 0.5, 0.25));

    ImageSourceSet set;
    ImageSource img;
    img.position = Point3(0, 0, 0);
    img.wall_gain = 4.0 * M_PI * 2.0;  // unit amplitude
    set.sources.push_back(img);

    Segment seg;
    seg.index = 1;
    seg.l_start = 0;
    seg.l_end = locations - 1;
    seg.n_locations = locations;

    const TransitionMatrix a =
        analytic_transition(set, seg, positions, 128, kClock, 2.0 * kClock.period());
    CHECK(a.source == TransitionMatrix::Source::Analytic);
    CHECK(a.dense().isIdentity(1e-12));

    const ReflectionMapEstimate map =
        analytic_reflection_map(set, seg, positions, kClock, 2.0 * kClock.period());
    CHECK(map.reflections[0].step_seconds == 0.0);
  }

  SUBCASE("integer-shift far-field case agrees with the estimated matrix") {
    // Two images placed so the TOA shift across the segment is exactly
    // integer; the estimation chain should reproduce the analytic rows.
    const Point3 mic_start(1.0, 1.0, 1.0);
    const int locations = 6;
    const double delta = 5.0 * ct;  // total displacement, 5 samples of travel
    std::vector<Point3> positions;
    for (int l = 0; l < locations; ++l)
      positions.push_back(mic_start + Point3(delta * l / (locations - 1), 0, 0));

    auto place = [&](double d1, double d2, double amp) {
      const double x = (d1 * d1 - d2 * d2 + delta * delta) / (2.0 * delta);
      const double y2 = std::max(0.0, d1 * d1 - x * x);
      ImageSource img;
      img.position = mic_start + Point3(x, std::sqrt(y2), 0.0);
      img.wall_gain = amp * 4.0 * M_PI * d1;
      return img;
    };
    ImageSourceSet set;
    set.sources.push_back(place(120.0 * ct, 122.0 * ct, 1.0));
    set.sources.push_back(place(140.0 * ct, 145.0 * ct, 0.8));

    Segment seg;
    seg.index = 1;
    seg.l_start = 0;
    seg.l_end = locations - 1;
    seg.n_locations = locations;

    const int n = 160;
    const TransitionMatrix analytic =
        analytic_transition(set, seg, positions, n, kClock, 2.0 * kClock.period());

    const Rir h_st = synthesize_rir(set, positions.front(), kClock, n, 6);
    const Rir h_en = synthesize_rir(set, positions.back(), kClock, n, 6);
    const WarpMatrices wm = warp_matrices(backtrack(dtw_cost(h_st, h_en)), n);
    const ReflectionMapEstimate est_map = estimate_reflection_map(
        extract_diagonals(wm.mapping, 8), locations, kClock);
    const ReflectionCoverage est_cov = reflection_sets(est_map, n, kClock);
    std::vector<double> steps;
    for (const ReflectionEstimate& r : est_map.reflections) steps.push_back(r.step_seconds);
    const TransitionMatrix estimated = build_transition(est_cov, steps, n, kClock);

    // Compare on the analytically occupied rows only.
    const Mat a_dense = analytic.dense();
    const Mat e_dense = estimated.dense();
    for (int row : analytic.covered_rows)
      for (int col = 0; col < n; ++col)
        CHECK(std::abs(a_dense(row, col) - e_dense(row, col)) <= 0.05);
  }
}

TEST_CASE("piecewise transition lookup") {
  const SampleClock clock = kClock;
  const std::vector<Point3> waypoints{{0, 0, 1}, {0.25, 0, 1}, {0.25, 0.25, 1}};
  const std::vector<double> speeds{8.0, 8.0};
  const Trajectory traj = Trajectory::from_waypoints(waypoints, speeds, clock);
  REQUIRE(traj.segments.size() == 2);

  const int n = 8;
  const ReflectionCoverage empty_cov = reflection_sets(map_with({}), n, clock);
  TransitionMatrix a1 = build_transition(empty_cov, {}, n, clock);
  const double step = 1.0 * clock.period();
  const ReflectionCoverage cov =
      reflection_sets(map_with({{step, samples_interval(2, 5)}}), n, clock);
  TransitionMatrix a2 = build_transition(cov, {&step, 1}, n, clock);

  SUBCASE("single segment covers the whole range") {
    Trajectory single = Trajectory::from_waypoints(
        std::vector<Point3>{{0, 0, 1}, {0.25, 0, 1}}, std::vector<double>{8.0}, clock);
    const PiecewiseTransition pw = assemble_piecewise(single, {a1});
    for (int l = 1; l < single.total_locations(); ++l)
      CHECK(&pw.at(l) == &pw.matrices()[0]);
    CHECK_THROWS_AS(pw.at(0), ConfigError);
    CHECK_THROWS_AS(pw.at(single.total_locations()), ConfigError);
  }

  SUBCASE("boundary location belongs to the earlier segment") {
    const PiecewiseTransition pw = assemble_piecewise(traj, {a1, a2});
    const int boundary = traj.segments[0].l_end;
    CHECK(&pw.at(boundary) == &pw.matrices()[0]);
    CHECK(&pw.at(boundary + 1) == &pw.matrices()[1]);
  }

  SUBCASE("one matrix per segment is required") {
    CHECK_THROWS_AS(assemble_piecewise(traj, {a1}), ConfigError);
  }
}

TEST_CASE("repeated application approximates the segment-end RIR") {
  // Far-field scenario with exact analytic parameters: A_s^(L-1) h(start)
  // should land close to h(end). The reference misalignment value was
  // produced by this oracle once and is pinned within +-3 dB.
  const ShoeboxRoom room = [] {
    ShoeboxRoom r;
    r.dimensions = Point3(5, 4, 3);
    r.reflection = {0.9, 0.8, 0.85, 0.7, 0.75, 0.8};
    return r;
  }();
  const Point3 source(0.5, 0.7, 1.3);
  const ImageSourceSet images = enumerate_images(room, source, 1);

  const SampleClock clock = kClock;
  const std::vector<Point3> waypoints{{4.1, 1.0, 1.0}, {4.1, 1.5, 1.0}};
  const Trajectory traj =
      Trajectory::from_waypoints(waypoints, std::vector<double>{8.0}, clock);
  const Segment& seg = traj.segments[0];

  const int n = 256;
  const TransitionMatrix a = analytic_transition(images, seg, traj.positions, n, clock,
                                                 3.0 * clock.period());

  const Rir h_start = synthesize_rir(images, traj.positions.front(), clock, n, 40);
  const Rir h_end = synthesize_rir(images, traj.positions.back(), clock, n, 40);

  Vec h = h_start.taps;
  for (int l = 1; l < seg.n_locations; ++l) h = a.apply(h);

  const double nm_db = 20.0 * std::log10((h - h_end.taps).norm() / h_end.taps.norm());
  MESSAGE("pure-prediction NM across the segment: ", nm_db, " dB");
  const double pinned = -23.7;  // recorded oracle value, see note above
  CHECK(nm_db <= pinned + 3.0);
  CHECK(nm_db >= pinned - 3.0);
}
