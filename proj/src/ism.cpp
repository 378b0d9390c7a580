#include "rirtrack/ism.hpp"

#include "rirtrack/rng.hpp"
#include "rirtrack/signal_ops.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace rirtrack {

void ShoeboxRoom::validate() const {
  if (!(dimensions.x() > 0 && dimensions.y() > 0 && dimensions.z() > 0))
    throw ConfigError("room dimensions must be positive");
  for (double r : reflection)
    if (std::abs(r) > 1.0) throw ConfigError("wall reflection magnitude must be <= 1");
  if (!(speed_of_sound > 0)) throw ConfigError("speed of sound must be positive");
}

bool ShoeboxRoom::contains(const Point3& p) const {
  for (int axis = 0; axis < 3; ++axis)
    if (!(p[axis] > 0.0 && p[axis] < dimensions[axis])) return false;
  return true;
}

ImageSourceSet enumerate_images(const ShoeboxRoom& room, const Point3& source_pos,
                                int max_order) {
  room.validate();
  if (max_order < 0) throw ConfigError("max_order must be >= 0");
  if (!room.contains(source_pos))
    throw GeometryError("source must be strictly inside the room");

  // Mirror index i = 2m - q per axis, with q in {0,1} the parity and m the
  // periodic copy; the reflection order is |ix| + |iy| + |iz|.
  const int m_span = max_order / 2 + 1;

  struct Keyed {
    std::tuple<int, int, int, int> key;  // (order, ix, iy, iz)
    ImageSource img;
  };
  std::vector<Keyed> found;

  for (int mx = -m_span; mx <= m_span; ++mx)
    for (int qx = 0; qx <= 1; ++qx) {
      const int ix = 2 * mx - qx;
      if (std::abs(ix) > max_order) continue;
      for (int my = -m_span; my <= m_span; ++my)
        for (int qy = 0; qy <= 1; ++qy) {
          const int iy = 2 * my - qy;
          if (std::abs(ix) + std::abs(iy) > max_order) continue;
          for (int mz = -m_span; mz <= m_span; ++mz)
            for (int qz = 0; qz <= 1; ++qz) {
              const int iz = 2 * mz - qz;
              const int order = std::abs(ix) + std::abs(iy) + std::abs(iz);
              if (order > max_order) continue;

              ImageSource img;
              img.order = order;
              img.position = Point3(
                  (1 - 2 * qx) * source_pos.x() + 2.0 * mx * room.dimensions.x(),
                  (1 - 2 * qy) * source_pos.y() + 2.0 * my * room.dimensions.y(),
                  (1 - 2 * qz) * source_pos.z() + 2.0 * mz * room.dimensions.z());
              img.wall_gain = std::pow(room.reflection[0], std::abs(mx - qx)) *
                              std::pow(room.reflection[1], std::abs(mx)) *
                              std::pow(room.reflection[2], std::abs(my - qy)) *
                              std::pow(room.reflection[3], std::abs(my)) *
                              std::pow(room.reflection[4], std::abs(mz - qz)) *
                              std::pow(room.reflection[5], std::abs(mz));
              found.push_back({{order, ix, iy, iz}, img});
            }
        }
    }

  std::sort(found.begin(), found.end(),
            [](const Keyed& a, const Keyed& b) { return a.key < b.key; });

  ImageSourceSet set;
  set.speed_of_sound = room.speed_of_sound;
  set.sources.reserve(found.size());
  for (Keyed& k : found) set.sources.push_back(k.img);
  return set;
}

Rir synthesize_rir(const ImageSourceSet& images, const Point3& mic_pos,
                   const SampleClock& clock, int n_taps, int sinc_halfwidth) {
  if (n_taps < 1) throw ConfigError("RIR length must be >= 1");
  if (sinc_halfwidth < 1) throw ConfigError("sinc halfwidth must be >= 1");

  Vec taps = Vec::Zero(n_taps);

  for (const ImageSource& img : images.sources) {
    const double dist = (mic_pos - img.position).norm();
    const double center = dist / images.speed_of_sound * clock.sample_rate;
    if (center > n_taps - 1) continue;  // arrives after the modeled early part
    const double amplitude = img.wall_gain / (4.0 * M_PI * dist);

    const int lo = std::max(0, static_cast<int>(std::ceil(center - sinc_halfwidth)));
    const int hi = std::min(n_taps - 1, static_cast<int>(std::floor(center + sinc_halfwidth)));
    for (int n = lo; n <= hi; ++n)
      taps[n] += amplitude * tapered_sinc(n - center, sinc_halfwidth);
  }
  return Rir(std::move(taps), clock);
}

MovingRender render_moving_recording(const ShoeboxRoom& room, const Point3& source_pos,
                                     const Trajectory& traj, const SourceSignal& x,
                                     double noise_std, int n_taps, int max_order,
                                     int sinc_halfwidth, uint64_t seed) {
  traj.validate(x.clock);
  if (noise_std < 0) throw ConfigError("noise std must be non-negative");
  const int total = traj.total_locations();
  if (static_cast<int>(x.samples.size()) < total)
    throw ConfigError("source signal shorter than the trajectory");
  for (const Point3& p : traj.positions)
    if (!room.contains(p)) throw GeometryError("trajectory position outside the room");

  const ImageSourceSet images = enumerate_images(room, source_pos, max_order);

  MovingRender out;
  out.ground_truth.reserve(total);
  for (int l = 0; l < total; ++l)
    out.ground_truth.push_back(
        synthesize_rir(images, traj.positions[l], x.clock, n_taps, sinc_halfwidth));

  Rng rng(seed);
  out.recording.clock = x.clock;
  out.recording.samples.resize(total);
  for (int l = 0; l < total; ++l) {
    double sample = convolve_observe(out.ground_truth[l], x, l);
    if (noise_std > 0) sample += noise_std * rng.gaussian();
    out.recording.samples[l] = sample;
  }
  return out;
}

}  // namespace rirtrack
