#include "rirtrack/dataset.hpp"

#include "rirtrack/csv.hpp"
#include "rirtrack/resample.hpp"
#include "rirtrack/wav_io.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace rirtrack {

namespace {

std::pair<int, int> rate_ratio(double target, double actual) {
  const long t = std::lround(target);
  const long a = std::lround(actual);
  if (t <= 0 || a <= 0 || std::abs(target - t) > 1e-6 || std::abs(actual - a) > 1e-6)
    throw DataError("non-integer sample rates cannot be resampled");
  return {static_cast<int>(t), static_cast<int>(a)};
}

std::vector<double> load_audio(const std::filesystem::path& path, double declared_rate,
                               bool allow_resample, double* file_rate_out = nullptr) {
  WavData wav = read_wav(path);
  if (file_rate_out) *file_rate_out = wav.sample_rate;
  if (wav.sample_rate == declared_rate) return std::move(wav.samples);
  if (!allow_resample)
    throw DataError(path.filename().string() + " is at " +
                    std::to_string(wav.sample_rate) + " Hz but the configuration declares " +
                    std::to_string(declared_rate) + " Hz and resampling is disabled");
  const auto [up, down] = rate_ratio(declared_rate, wav.sample_rate);
  return resample_poly(wav.samples, up, down);
}

}  // namespace

DatasetBundle load_dataset(const std::filesystem::path& root, double declared_rate,
                           bool allow_resample, int n_taps) {
  if (n_taps < 1) throw ConfigError("RIR length must be >= 1");
  for (const char* name : {"source.wav", "recording.wav", "positions.csv", "timestamps.csv"})
    if (!std::filesystem::exists(root / name))
      throw DataError("dataset is missing " + std::string(name) + " under " + root.string());

  const SampleClock clock(declared_rate);
  DatasetBundle bundle;
  bundle.source.clock = clock;
  bundle.source.samples = load_audio(root / "source.wav", declared_rate, allow_resample);
  double recording_file_rate = declared_rate;
  bundle.recording.clock = clock;
  bundle.recording.samples =
      load_audio(root / "recording.wav", declared_rate, allow_resample, &recording_file_rate);

  const CsvTable positions = read_csv(root / "positions.csv");
  const int pcol = positions.column("p");
  const int xcol = positions.column("x");
  const int ycol = positions.column("y");
  const int zcol = positions.column("z");

  std::map<int, Point3> by_id;
  for (const auto& row : positions.rows)
    by_id[std::stoi(row[pcol])] =
        Point3(std::stod(row[xcol]), std::stod(row[ycol]), std::stod(row[zcol]));

  const CsvTable timestamps = read_csv(root / "timestamps.csv");
  const int tp = timestamps.column("p");
  const int ts = timestamps.column("sample_index");
  std::map<int, long> stamp_by_id;
  for (const auto& row : timestamps.rows) stamp_by_id[std::stoi(row[tp])] = std::stol(row[ts]);

  if (by_id.size() != stamp_by_id.size())
    throw DataError("positions.csv and timestamps.csv disagree on the point set");

  // Timestamps index the recording as stored on disk; rescale if it was
  // resampled above.
  const double stamp_scale = declared_rate / recording_file_rate;

  long previous = -1;
  for (const auto& [id, pos] : by_id) {
    const auto stamp = stamp_by_id.find(id);
    if (stamp == stamp_by_id.end())
      throw DataError("timestamps.csv is missing point " + std::to_string(id));
    const long location = std::lround(stamp->second * stamp_scale);
    if (location <= previous)
      throw DataError("timestamps must be strictly increasing along the trajectory");
    if (location >= static_cast<long>(bundle.recording.samples.size()))
      throw DataError("timestamp beyond the recording for point " + std::to_string(id));
    previous = location;

    GridPoint point;
    point.id = id;
    point.position = pos;
    point.location = static_cast<int>(location);
    bundle.grid.push_back(point);

    std::vector<double> rir_samples = load_audio(
        root / ("rir_" + std::to_string(id) + ".wav"), declared_rate, allow_resample);
    Vec taps = Vec::Zero(n_taps);
    const int have = std::min<int>(n_taps, static_cast<int>(rir_samples.size()));
    for (int i = 0; i < have; ++i) taps[i] = rir_samples[i];
    bundle.grid_rirs.emplace_back(std::move(taps), clock);
  }
  if (bundle.grid.size() < 2) throw DataError("dataset needs at least two grid points");
  return bundle;
}

void write_dataset(const std::filesystem::path& root, const DatasetBundle& bundle) {
  std::filesystem::create_directories(root);
  const double rate = bundle.source.clock.sample_rate;

  write_wav(root / "source.wav", bundle.source.samples, rate);
  write_wav(root / "recording.wav", bundle.recording.samples, rate);

  {
    CsvWriter positions(root / "positions.csv", {"p", "x", "y", "z"});
    for (const GridPoint& g : bundle.grid)
      positions.row({std::to_string(g.id), format_double(g.position.x()),
                     format_double(g.position.y()), format_double(g.position.z())});
  }
  {
    CsvWriter timestamps(root / "timestamps.csv", {"p", "sample_index"});
    for (const GridPoint& g : bundle.grid)
      timestamps.row({std::to_string(g.id), std::to_string(g.location)});
  }
  for (size_t i = 0; i < bundle.grid.size(); ++i) {
    const Vec& taps = bundle.grid_rirs[i].taps;
    std::vector<double> samples(taps.data(), taps.data() + taps.size());
    write_wav(root / ("rir_" + std::to_string(bundle.grid[i].id) + ".wav"), samples, rate);
  }
}

}  // namespace rirtrack
