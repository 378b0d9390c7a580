#include "rirtrack/types.hpp"

#include <cmath>

namespace rirtrack {

namespace {
constexpr double kSpeedTolerance = 1e-6;  // relative, spacing vs velocity*T
}

void Segment::validate(double period) const {
  if (index < 1) throw ConfigError("segment index must be >= 1");
  if (l_end <= l_start) throw ConfigError("segment must span at least two locations");
  if (n_locations != l_end - l_start + 1)
    throw ConfigError("segment location count inconsistent with index range");
  if (velocity < 0 || spacing < 0)
    throw ConfigError("segment velocity and spacing must be non-negative");
  const double expected = velocity * period;
  if (std::abs(spacing - expected) > kSpeedTolerance * std::max(expected, spacing))
    throw ConfigError("segment spacing does not match velocity * period");
  if (std::abs(length_m - (n_locations - 1) * spacing) >
      kSpeedTolerance * std::max(length_m, 1.0))
    throw ConfigError("segment length inconsistent with spacing");
}

void Trajectory::validate(const SampleClock& clock) const {
  if (positions.size() < 2) throw ConfigError("trajectory needs at least two locations");
  if (segments.empty()) throw ConfigError("trajectory has no segments");
  if (timestamps && timestamps->size() != positions.size())
    throw ConfigError("timestamp count does not match position count");

  int expected_start = 0;
  for (size_t s = 0; s < segments.size(); ++s) {
    const Segment& seg = segments[s];
    seg.validate(clock.period());
    if (seg.index != static_cast<int>(s) + 1)
      throw ConfigError("segment indices must be consecutive from 1");
    if (seg.l_start != expected_start)
      throw ConfigError("segment does not start at the previous segment's end");
    expected_start = seg.l_end;
  }
  if (expected_start != total_locations() - 1)
    throw ConfigError("segments do not cover the full trajectory");

  for (const Point3& p : positions)
    if (!p.allFinite()) throw DataError("trajectory position is not finite");
}

Trajectory Trajectory::from_waypoints(std::span<const Point3> waypoints,
                                      std::span<const double> speeds,
                                      const SampleClock& clock) {
  if (waypoints.size() < 2) throw ConfigError("need at least two waypoints");
  if (speeds.size() != waypoints.size() - 1)
    throw ConfigError("need one speed per leg");

  Trajectory traj;
  traj.positions.push_back(waypoints[0]);

  for (size_t leg = 0; leg + 1 < waypoints.size(); ++leg) {
    const Point3 a = waypoints[leg];
    const Point3 b = waypoints[leg + 1];
    const double leg_length = (b - a).norm();
    if (!(leg_length > 0)) throw ConfigError("waypoints must be distinct");
    if (!(speeds[leg] > 0)) throw ConfigError("leg speed must be positive");

    const double nominal_spacing = speeds[leg] * clock.period();
    const int steps = std::max(1, static_cast<int>(std::lround(leg_length / nominal_spacing)));
    const double spacing = leg_length / steps;

    Segment seg;
    seg.index = static_cast<int>(leg) + 1;
    seg.l_start = static_cast<int>(traj.positions.size()) - 1;
    seg.l_end = seg.l_start + steps;
    seg.n_locations = steps + 1;
    seg.spacing = spacing;
    seg.velocity = spacing * clock.sample_rate;
    seg.length_m = leg_length;

    const Point3 dir = (b - a) / leg_length;
    for (int i = 1; i <= steps; ++i) traj.positions.push_back(a + dir * (spacing * i));
    traj.segments.push_back(seg);
  }

  traj.validate(clock);
  return traj;
}

}  // namespace rirtrack
