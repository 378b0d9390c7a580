#pragma once

#include "rirtrack/types.hpp"

#include <filesystem>

namespace rirtrack {

/// One fixed measurement point along the trajectory: its id p, position,
/// and the location (sample) index l_p at which the moving microphone
/// crossed it.
struct GridPoint {
  int id = 0;
  Point3 position{0, 0, 0};
  int location = 0;
};

/// On-disk layout (all in one directory):
///   source.wav      excitation signal x
///   recording.wav   moving-microphone signal y
///   positions.csv   p,x,y,z          (meters)
///   timestamps.csv  p,sample_index   (index into recording.wav)
///   rir_<p>.wav     measured RIR at each grid point
struct DatasetBundle {
  SourceSignal source;
  MicRecording recording;
  std::vector<GridPoint> grid;   // sorted by id
  std::vector<Rir> grid_rirs;    // same order as grid
};

/// Loads a bundle, bringing every signal onto the declared rate. Files at a
/// different rate are polyphase-resampled when allow_resample is set and
/// rejected otherwise; timestamps are rescaled along with the recording.
/// Grid RIRs are zero-padded or truncated to n_taps.
DatasetBundle load_dataset(const std::filesystem::path& root, double declared_rate,
                           bool allow_resample, int n_taps);

void write_dataset(const std::filesystem::path& root, const DatasetBundle& bundle);

}  // namespace rirtrack
