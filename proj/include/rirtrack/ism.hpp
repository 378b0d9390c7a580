#pragma once

#include "rirtrack/types.hpp"

#include <array>
#include <cstdint>

namespace rirtrack {

/// Rectangular room with per-wall reflection coefficients, ordered
/// [x=0, x=Lx, y=0, y=Ly, z=0, z=Lz].
struct ShoeboxRoom {
  Point3 dimensions{0, 0, 0};
  std::array<double, 6> reflection{};
  double speed_of_sound = 343.0;

  void validate() const;
  bool contains(const Point3& p) const;
};

/// One (image) source: mirrored position, the product of the wall
/// coefficients along its reflection path, and the reflection order.
/// The received amplitude is wall_gain / (4 pi distance), evaluated at
/// whatever microphone position the image is observed from.
struct ImageSource {
  Point3 position{0, 0, 0};
  double wall_gain = 1.0;
  int order = 0;
};

struct ImageSourceSet {
  std::vector<ImageSource> sources;  // sources[0] is the direct source
  double speed_of_sound = 343.0;     // carried along for TOA evaluation

  int count() const { return static_cast<int>(sources.size()); }

  /// Time of arrival of source r at the given microphone position.
  double toa(int r, const Point3& mic_pos) const {
    return (mic_pos - sources[r].position).norm() / speed_of_sound;
  }
};

/// Enumerates the direct source plus all image sources up to the given
/// reflection order, sorted by (order, mirror index). Throws GeometryError
/// if the source is on or outside the room boundary.
ImageSourceSet enumerate_images(const ShoeboxRoom& room, const Point3& source_pos,
                                int max_order);

/// Band-limited RIR at one microphone position: each image contributes an
/// amplitude-scaled sinc pulse centered at its time of arrival, truncated
/// with a Hann taper at +-sinc_halfwidth samples. Images arriving after tap
/// N-1 are skipped.
Rir synthesize_rir(const ImageSourceSet& images, const Point3& mic_pos,
                   const SampleClock& clock, int n_taps, int sinc_halfwidth);

struct MovingRender {
  MicRecording recording;
  std::vector<Rir> ground_truth;  // one RIR per location
};

/// Renders the moving-microphone recording y(l) = x^T(l) h(l) + v(l) with
/// white Gaussian noise of the given standard deviation (seeded), returning
/// the recording together with the ground-truth RIR at every location.
MovingRender render_moving_recording(const ShoeboxRoom& room, const Point3& source_pos,
                                     const Trajectory& traj, const SourceSignal& x,
                                     double noise_std, int n_taps, int max_order,
                                     int sinc_halfwidth, uint64_t seed);

}  // namespace rirtrack
