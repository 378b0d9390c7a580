#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace rirtrack {

struct WavData {
  std::vector<double> samples;  // first channel
  double sample_rate = 0.0;
  int channels = 1;
};

/// Reads PCM (16/24/32 bit) or IEEE float (32/64 bit) RIFF WAVE files.
/// Multichannel files yield the first channel. Throws DataError on malformed
/// or unsupported input.
WavData read_wav(const std::filesystem::path& path);

/// Writes a mono 64-bit IEEE float WAVE file (lossless for doubles, so
/// bundles round-trip exactly).
void write_wav(const std::filesystem::path& path, const std::vector<double>& samples,
               double sample_rate);

}  // namespace rirtrack
