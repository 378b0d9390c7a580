#include "rirtrack/pipeline.hpp"

#include "rirtrack/csv.hpp"
#include "rirtrack/dtw.hpp"
#include "rirtrack/ism.hpp"
#include "rirtrack/rng.hpp"
#include "rirtrack/signal_ops.hpp"
#include "rirtrack/wav_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <map>
#include <set>

namespace rirtrack {

using Json = nlohmann::ordered_json;

namespace {

template <typename F>
auto with_stage(const std::string& label, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const GeometryError& e) {
    throw GeometryError(label + ": " + e.what());
  } catch (const IndexError& e) {
    throw IndexError(label + ": " + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(label + ": " + e.what());
  } catch (const DataError& e) {
    throw DataError(label + ": " + e.what());
  } catch (const NumericError& e) {
    throw NumericError(label + ": " + e.what());
  }
}

Point3 to_point(const std::array<double, 3>& a) { return Point3(a[0], a[1], a[2]); }

ShoeboxRoom room_from_config(const RoomConfig& rc) {
  ShoeboxRoom room;
  room.dimensions = to_point(rc.dimensions);
  room.reflection = rc.reflection;
  room.speed_of_sound = rc.speed_of_sound;
  return room;
}

FillMode fill_from_config(const TransitionConfig& tc) {
  return tc.fill == "zero" ? FillMode::ZeroRows : FillMode::Identity;
}

double rms(std::span<const double> samples) {
  double acc = 0.0;
  for (double s : samples) acc += s * s;
  return std::sqrt(acc / std::max<size_t>(1, samples.size()));
}

struct SynthScene {
  Trajectory trajectory;
  SourceSignal source;
  MicRecording recording;
  std::vector<Rir> ground_truth;
  double noise_std = 0.0;
};

SynthScene render_scene(const ScenarioConfig& cfg) {
  const SampleClock clock(cfg.sample_rate);
  std::vector<Point3> waypoints;
  for (const auto& w : cfg.trajectory.waypoints) waypoints.push_back(to_point(w));

  SynthScene scene;
  scene.trajectory = Trajectory::from_waypoints(waypoints, cfg.trajectory.speeds, clock);
  const int total = scene.trajectory.total_locations();

  Rng master(cfg.seed);
  const uint64_t source_seed = master.next_seed();
  const uint64_t noise_seed = master.next_seed();

  scene.source.clock = clock;
  scene.source.samples.resize(total);
  Rng source_rng(source_seed);
  for (double& s : scene.source.samples) s = source_rng.gaussian();

  const ShoeboxRoom room = room_from_config(cfg.room);
  MovingRender render = render_moving_recording(
      room, to_point(cfg.source_position), scene.trajectory, scene.source,
      /*noise_std=*/0.0, cfg.rir_length, cfg.sim.max_order, cfg.sim.sinc_halfwidth,
      /*seed=*/0);
  scene.ground_truth = std::move(render.ground_truth);
  scene.recording = std::move(render.recording);

  double noise_std = cfg.noise.std_dev;
  if (cfg.noise.snr_db)
    noise_std = rms(scene.recording.samples) * std::pow(10.0, -*cfg.noise.snr_db / 20.0);
  scene.noise_std = noise_std;
  if (noise_std > 0) {
    Rng noise_rng(noise_seed);
    for (double& s : scene.recording.samples) s += noise_std * noise_rng.gaussian();
  }
  return scene;
}

/// Measurement-grid point ids and locations for a synthetic trajectory,
/// spaced by arc length like a measured dataset's RIR grid.
std::vector<int> grid_locations_by_spacing(const Trajectory& traj, double spacing) {
  if (!(spacing > 0)) throw ConfigError("grid spacing must be positive");
  std::vector<int> locations{0};
  double arc = 0.0;
  double next_target = spacing;
  for (size_t l = 1; l < traj.positions.size(); ++l) {
    arc += (traj.positions[l] - traj.positions[l - 1]).norm();
    if (arc + 1e-12 >= next_target) {
      locations.push_back(static_cast<int>(l));
      while (next_target <= arc + 1e-12) next_target += spacing;
    }
  }
  if (locations.back() != traj.total_locations() - 1)
    locations.push_back(traj.total_locations() - 1);
  return locations;
}

PreparedScenario prepare_synthetic(const ScenarioConfig& cfg) {
  SynthScene scene = render_scene(cfg);

  PreparedScenario out;
  out.clock = SampleClock(cfg.sample_rate);
  out.trajectory = std::move(scene.trajectory);
  out.source = std::move(scene.source);
  out.recording = std::move(scene.recording);
  out.noise_std = scene.noise_std;

  out.endpoint_rirs.push_back(scene.ground_truth[out.trajectory.segments.front().l_start]);
  for (const Segment& seg : out.trajectory.segments)
    out.endpoint_rirs.push_back(scene.ground_truth[seg.l_end]);

  // Evaluation points: every stride-th location (ground truth exists
  // everywhere in synthetic mode).
  const int total = out.trajectory.total_locations();
  int id = 1;
  for (int l = 0; l < total; l += cfg.evaluation.stride) {
    GridPoint point;
    point.id = id++;
    point.location = l;
    point.position = out.trajectory.positions[l];
    out.grid.push_back(point);
    out.grid_rirs.push_back(scene.ground_truth[l]);
  }
  return out;
}

PreparedScenario prepare_dataset(const ScenarioConfig& cfg) {
  const DatasetBundle bundle = load_dataset(cfg.dataset.path, cfg.sample_rate,
                                            cfg.dataset.resample, cfg.rir_length);

  std::map<int, int> grid_index;
  for (size_t i = 0; i < bundle.grid.size(); ++i) grid_index[bundle.grid[i].id] = static_cast<int>(i);

  const std::vector<int>& chosen = cfg.dataset.segment_points;
  std::vector<int> chosen_idx;
  for (int id : chosen) {
    const auto it = grid_index.find(id);
    if (it == grid_index.end())
      throw ConfigError("segment point " + std::to_string(id) + " is not a grid point");
    chosen_idx.push_back(it->second);
  }
  for (size_t i = 1; i < chosen_idx.size(); ++i)
    if (bundle.grid[chosen_idx[i]].location <= bundle.grid[chosen_idx[i - 1]].location)
      throw ConfigError("segment points must be ordered along the trajectory");

  const int offset = bundle.grid[chosen_idx.front()].location;
  const int last = bundle.grid[chosen_idx.back()].location;
  const int total = last - offset + 1;
  const SampleClock clock(cfg.sample_rate);

  PreparedScenario out;
  out.clock = clock;

  // Positions: piecewise linear through every grid point between the chosen
  // endpoints, indexed by location.
  out.trajectory.positions.resize(total);
  const int first_grid = chosen_idx.front();
  const int last_grid = chosen_idx.back();
  for (int g = first_grid; g < last_grid; ++g) {
    const GridPoint& a = bundle.grid[g];
    const GridPoint& b = bundle.grid[g + 1];
    if (b.location <= a.location)
      throw DataError("grid timestamps must increase along the trajectory");
    for (int l = a.location; l <= b.location; ++l) {
      const double t = static_cast<double>(l - a.location) / (b.location - a.location);
      out.trajectory.positions[l - offset] = a.position + t * (b.position - a.position);
    }
  }

  // Segments between consecutive chosen points; speed is the grid polyline
  // length over the traversal time.
  for (size_t s = 0; s + 1 < chosen_idx.size(); ++s) {
    const GridPoint& a = bundle.grid[chosen_idx[s]];
    const GridPoint& b = bundle.grid[chosen_idx[s + 1]];
    double path_length = 0.0;
    for (int g = chosen_idx[s]; g < chosen_idx[s + 1]; ++g)
      path_length += (bundle.grid[g + 1].position - bundle.grid[g].position).norm();

    Segment seg;
    seg.index = static_cast<int>(s) + 1;
    seg.l_start = a.location - offset;
    seg.l_end = b.location - offset;
    seg.n_locations = seg.l_end - seg.l_start + 1;
    seg.length_m = path_length;
    seg.spacing = path_length / (seg.n_locations - 1);
    seg.velocity = seg.spacing * clock.sample_rate;
    out.trajectory.segments.push_back(seg);

    if (s == 0) out.endpoint_rirs.push_back(bundle.grid_rirs[chosen_idx[s]]);
    out.endpoint_rirs.push_back(bundle.grid_rirs[chosen_idx[s + 1]]);
  }
  out.trajectory.validate(clock);

  // The run is rebased to start at the first chosen point; excitation
  // history before it is treated as silence.
  out.source.clock = clock;
  out.source.samples.assign(bundle.source.samples.begin() + offset,
                            bundle.source.samples.end());
  out.recording.clock = clock;
  out.recording.samples.assign(bundle.recording.samples.begin() + offset,
                               bundle.recording.samples.end());
  if (static_cast<int>(out.source.samples.size()) < total)
    throw DataError("source signal ends before the last segment point");

  for (size_t i = 0; i < bundle.grid.size(); ++i) {
    if (bundle.grid[i].location < offset || bundle.grid[i].location > last) continue;
    GridPoint point = bundle.grid[i];
    point.location -= offset;
    out.grid.push_back(point);
    out.grid_rirs.push_back(bundle.grid_rirs[i]);
  }
  return out;
}

struct SegmentEstimation {
  TransitionMatrix matrix;
  ReflectionMapEstimate map;
  ReflectionCoverage coverage;
  WarpMatrices warp;  // kept for debug dumps
};

SegmentEstimation estimate_segment_transition(const Rir& h_start, const Rir& h_end,
                                              const Segment& seg,
                                              const ScenarioConfig& cfg) {
  SegmentEstimation est;
  const CostMatrix cost = dtw_cost(h_start, h_end);
  const WarpPath path = backtrack(cost);
  est.warp = warp_matrices(path, h_start.length());
  const std::vector<DiagonalSegment> runs =
      extract_diagonals(est.warp.mapping, cfg.dtw.min_diag_len);
  est.map = estimate_reflection_map(runs, seg.n_locations, h_start.clock);
  est.coverage = reflection_sets(est.map, h_start.length(), h_start.clock);

  std::vector<double> steps;
  for (const ReflectionEstimate& r : est.map.reflections) steps.push_back(r.step_seconds);
  est.matrix = build_transition(est.coverage, steps, h_start.length(), h_start.clock,
                                fill_from_config(cfg.transition), cfg.transition.halfwidth);
  est.matrix.segment_index = seg.index;
  est.matrix.source = TransitionMatrix::Source::DtwEstimated;
  return est;
}

void dump_matrix_csv(const std::filesystem::path& path, const Mat& m) {
  std::vector<std::string> header(m.cols());
  for (int c = 0; c < m.cols(); ++c) header[c] = "c" + std::to_string(c);
  CsvWriter writer(path, header);
  std::vector<std::string> cells(m.cols());
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) cells[c] = format_double(m(r, c));
    writer.row(cells);
  }
}

VariantReport evaluate_variant(Variant variant, const FilterRun& run,
                               const PreparedScenario& scenario, const ScenarioConfig& cfg,
                               std::vector<std::string>& warnings) {
  VariantReport report;
  report.variant = variant;

  const int total = scenario.trajectory.total_locations();
  const int window = cfg.evaluation.ncc_window;
  std::vector<double> nm_values;

  for (size_t i = 0; i < scenario.grid.size(); ++i) {
    const GridPoint& point = scenario.grid[i];
    const Rir& measured = scenario.grid_rirs[i];
    if (!(measured.taps.norm() > 0)) {
      warnings.push_back("skipped all-zero measured RIR at point " +
                         std::to_string(point.id));
      continue;
    }
    const int lo = std::max(0, point.location - window);
    const int hi = std::min(total - 1, point.location + window);
    std::vector<Vec> candidates;
    candidates.reserve(hi - lo + 1);
    for (int l = lo; l <= hi; ++l) candidates.push_back(run.at(l));

    const AlignmentResult align =
        align_ncc(candidates, lo, measured, point.location, window);
    const Vec& aligned = candidates[point.location - align.lag - lo];

    CurvePoint cp;
    cp.point_id = point.id;
    cp.location = point.location;
    cp.lag = align.lag;
    cp.nm_db = misalignment_db(aligned, measured.taps);
    report.curve.push_back(cp);
    nm_values.push_back(cp.nm_db);
  }

  report.median_nm_db = median(std::move(nm_values));
  report.correlation = pearson(
      std::span<const double>(run.reconstructed.data(), total),
      std::span<const double>(scenario.recording.samples.data(), total));
  return report;
}

void write_reports(const ScenarioConfig& cfg, const PreparedScenario& scenario,
                   const PipelineResult& result, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);

  save_config(cfg, out_dir / "config_echo.json");

  {
    std::vector<std::string> header{"p", "l_p"};
    for (const VariantReport& v : result.variants) {
      header.push_back("lag_" + variant_key(v.variant));
      header.push_back("nm_db_" + variant_key(v.variant));
    }
    CsvWriter writer(out_dir / "nm_curve.csv", header);
    if (!result.variants.empty()) {
      const size_t rows = result.variants.front().curve.size();
      for (size_t r = 0; r < rows; ++r) {
        std::vector<std::string> cells;
        cells.push_back(std::to_string(result.variants.front().curve[r].point_id));
        cells.push_back(std::to_string(result.variants.front().curve[r].location));
        for (const VariantReport& v : result.variants) {
          cells.push_back(std::to_string(v.curve[r].lag));
          cells.push_back(format_double(v.curve[r].nm_db));
        }
        writer.row(cells);
      }
    }
  }

  {
    Json summary;
    Json correlation, median_nm, labels;
    for (const VariantReport& v : result.variants) {
      correlation[variant_key(v.variant)] = v.correlation;
      median_nm[variant_key(v.variant)] = v.median_nm_db;
      labels[variant_key(v.variant)] = variant_label(v.variant);
    }
    summary["correlation"] = correlation;
    summary["median_nm_db"] = median_nm;
    summary["labels"] = labels;
    Json segs = Json::array();
    for (const SegmentReport& s : result.segments)
      segs.push_back(Json{{"index", s.index},
                          {"reflections_found", s.reflections_found},
                          {"covered_rows", s.covered_rows},
                          {"overlapping_intervals", s.overlapping_intervals}});
    summary["segments"] = segs;
    summary["noise_std"] = scenario.noise_std;
    summary["warnings"] = result.warnings;
    std::ofstream out(out_dir / "correlations.json", std::ios::binary);
    out << summary.dump(2) << "\n";
  }

  {
    std::ofstream out(out_dir / "summary.txt", std::ios::binary);
    out << "locations: " << scenario.trajectory.total_locations() << "\n";
    out << "segments: " << scenario.trajectory.segments.size() << "\n";
    out << "evaluation points: " << scenario.grid.size() << "\n";
    out << "noise std: " << format_double(scenario.noise_std) << "\n";
    for (const VariantReport& v : result.variants)
      out << variant_label(v.variant)
          << ": correlation=" << format_double(v.correlation)
          << " median_nm_db=" << format_double(v.median_nm_db) << "\n";
    for (const std::string& w : result.warnings) out << "warning: " << w << "\n";
  }
}

}  // namespace

double median(std::vector<double> values) {
  if (values.empty()) throw NumericError("median of an empty set");
  std::sort(values.begin(), values.end());
  const size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

PreparedScenario prepare_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  return with_stage("prepare", [&] {
    return cfg.mode == "synthetic" ? prepare_synthetic(cfg) : prepare_dataset(cfg);
  });
}

PipelineResult run_pipeline(const ScenarioConfig& cfg, const std::filesystem::path& out_dir) {
  PreparedScenario scenario = prepare_scenario(cfg);
  const int total = scenario.trajectory.total_locations();

  PipelineResult result;
  result.out_dir = out_dir;

  // One estimated transition matrix per segment.
  std::vector<TransitionMatrix> matrices;
  std::vector<SegmentEstimation> estimations;
  for (size_t s = 0; s < scenario.trajectory.segments.size(); ++s) {
    const Segment& seg = scenario.trajectory.segments[s];
    SegmentEstimation est = with_stage(
        "transition estimation, segment " + std::to_string(seg.index), [&] {
          return estimate_segment_transition(scenario.endpoint_rirs[s],
                                             scenario.endpoint_rirs[s + 1], seg, cfg);
        });

    SegmentReport sr;
    sr.index = seg.index;
    sr.reflections_found = static_cast<int>(est.map.reflections.size());
    sr.covered_rows = static_cast<int>(est.matrix.covered_rows.size());
    sr.overlapping_intervals = est.map.has_overlaps();
    if (sr.overlapping_intervals)
      result.warnings.push_back("segment " + std::to_string(seg.index) +
                                ": estimated reflection intervals overlap");
    result.segments.push_back(sr);
    matrices.push_back(est.matrix);
    estimations.push_back(std::move(est));
  }

  const PiecewiseTransition piecewise = with_stage("assemble transitions", [&] {
    return assemble_piecewise(scenario.trajectory, matrices);
  });

  KalmanParams params;
  params.observation_noise = cfg.kalman.observation_noise;
  params.process_noise = cfg.kalman.process_noise;
  params.alpha = cfg.kalman.alpha;
  params.initial_covariance = cfg.kalman.initial_covariance;

  KeepPolicy keep;
  if (cfg.mode == "dataset") {
    keep.all = false;
    std::set<int> wanted;
    for (const GridPoint& g : scenario.grid)
      for (int l = std::max(0, g.location - cfg.evaluation.ncc_window);
           l <= std::min(total - 1, g.location + cfg.evaluation.ncc_window); ++l)
        wanted.insert(l);
    keep.indices.assign(wanted.begin(), wanted.end());
  }

  const Rir initial = scenario.endpoint_rirs.front();

  std::vector<Variant> variants;
  for (const std::string& key : cfg.variants) variants.push_back(variant_from_key(key));

  // Variants are independent given the shared inputs; run them in parallel.
  std::vector<std::future<FilterRun>> futures;
  for (Variant v : variants)
    futures.push_back(std::async(std::launch::async, [&, v] {
      return with_stage("filter " + variant_key(v), [&] {
        return run_filter(v, &piecewise, scenario.source, scenario.recording, initial,
                          params, keep);
      });
    }));

  std::vector<FilterRun> runs;
  for (auto& f : futures) runs.push_back(f.get());

  for (size_t i = 0; i < variants.size(); ++i)
    result.variants.push_back(with_stage("evaluate " + variant_key(variants[i]), [&] {
      return evaluate_variant(variants[i], runs[i], scenario, cfg, result.warnings);
    }));

  with_stage("write reports", [&] {
    write_reports(cfg, scenario, result, out_dir);

    if (cfg.output.matrices) {
      const auto dir = out_dir / "transitions";
      std::filesystem::create_directories(dir);
      for (size_t s = 0; s < estimations.size(); ++s) {
        const std::string tag = "segment_" + std::to_string(s + 1);
        dump_matrix_csv(dir / (tag + "_matrix.csv"), estimations[s].matrix.dense());
        dump_matrix_csv(dir / (tag + "_mapping.csv"), Mat(estimations[s].warp.mapping));
      }
    }
    if (cfg.output.traces) {
      const auto dir = out_dir / "traces";
      std::filesystem::create_directories(dir);
      for (size_t i = 0; i < variants.size(); ++i) {
        CsvWriter writer(dir / (variant_key(variants[i]) + ".csv"),
                         {"l", "gain_norm", "innovation", "reconstructed"});
        for (int l = 0; l < total; ++l)
          writer.row({std::to_string(l), format_double(runs[i].gain_norm[l]),
                      format_double(runs[i].innovation[l]),
                      format_double(runs[i].reconstructed[l])});
      }
    }
    if (cfg.output.estimates) {
      for (size_t i = 0; i < variants.size(); ++i) {
        const auto dir = out_dir / "estimates" / variant_key(variants[i]);
        std::filesystem::create_directories(dir);
        CsvWriter alignment(dir / "alignment.csv", {"p", "lag"});
        for (const CurvePoint& cp : result.variants[i].curve) {
          const Vec& aligned = runs[i].at(cp.location - cp.lag);
          std::vector<double> samples(aligned.data(), aligned.data() + aligned.size());
          write_wav(dir / ("est_" + std::to_string(cp.point_id) + ".wav"), samples,
                    cfg.sample_rate);
          alignment.row({std::to_string(cp.point_id), std::to_string(cp.lag)});
        }
        std::vector<double> reconstructed(runs[i].reconstructed.begin(),
                                          runs[i].reconstructed.begin() + total);
        write_wav(dir / "reconstructed.wav", reconstructed, cfg.sample_rate);
      }
    }
  });

  return result;
}

void simulate_bundle(const ScenarioConfig& cfg, const std::filesystem::path& out_dir) {
  cfg.validate();
  if (cfg.mode != "synthetic")
    throw ConfigError("simulate requires a synthetic-mode config");

  with_stage("simulate", [&] {
    SynthScene scene = render_scene(cfg);

    DatasetBundle bundle;
    bundle.source = scene.source;
    bundle.recording = scene.recording;

    const std::vector<int> locations =
        grid_locations_by_spacing(scene.trajectory, cfg.trajectory.grid_spacing_m);
    for (size_t i = 0; i < locations.size(); ++i) {
      GridPoint point;
      point.id = static_cast<int>(i) + 1;
      point.location = locations[i];
      point.position = scene.trajectory.positions[locations[i]];
      bundle.grid.push_back(point);
      bundle.grid_rirs.push_back(scene.ground_truth[locations[i]]);
    }
    write_dataset(out_dir, bundle);

    Json info;
    info["sample_rate"] = cfg.sample_rate;
    info["rir_length"] = cfg.rir_length;
    info["grid_points"] = bundle.grid.size();
    info["locations"] = scene.trajectory.total_locations();
    info["noise_std"] = scene.noise_std;
    info["seed"] = cfg.seed;
    std::ofstream out(out_dir / "bundle_info.json", std::ios::binary);
    out << info.dump(2) << "\n";
    return 0;
  });
}

PipelineResult evaluate_estimates(const ScenarioConfig& cfg,
                                  const std::filesystem::path& estimates_dir,
                                  const std::filesystem::path& out_dir) {
  PreparedScenario scenario = prepare_scenario(cfg);
  const int total = scenario.trajectory.total_locations();

  PipelineResult result;
  result.out_dir = out_dir;

  for (const std::string& key : cfg.variants) {
    const Variant variant = variant_from_key(key);
    const auto dir = estimates_dir / key;
    if (!std::filesystem::exists(dir / "alignment.csv"))
      throw DataError("no stored estimates for variant " + key + " under " +
                      estimates_dir.string());

    const CsvTable alignment = read_csv(dir / "alignment.csv");
    const int pcol = alignment.column("p");
    const int lagcol = alignment.column("lag");
    std::map<int, int> lag_by_id;
    for (const auto& row : alignment.rows)
      lag_by_id[std::stoi(row[pcol])] = std::stoi(row[lagcol]);

    VariantReport report;
    report.variant = variant;
    std::vector<double> nm_values;
    for (size_t i = 0; i < scenario.grid.size(); ++i) {
      const GridPoint& point = scenario.grid[i];
      const auto est_path = dir / ("est_" + std::to_string(point.id) + ".wav");
      if (!std::filesystem::exists(est_path)) continue;
      const WavData est = read_wav(est_path);
      if (static_cast<int>(est.samples.size()) != scenario.grid_rirs[i].length())
        throw DataError("stored estimate length mismatch at point " +
                        std::to_string(point.id));
      Vec est_vec = Eigen::Map<const Vec>(est.samples.data(), est.samples.size());

      CurvePoint cp;
      cp.point_id = point.id;
      cp.location = point.location;
      cp.lag = lag_by_id.count(point.id) ? lag_by_id[point.id] : 0;
      cp.nm_db = misalignment_db(est_vec, scenario.grid_rirs[i].taps);
      report.curve.push_back(cp);
      nm_values.push_back(cp.nm_db);
    }
    if (report.curve.empty()) throw DataError("no usable estimates for variant " + key);
    report.median_nm_db = median(std::move(nm_values));

    const WavData reconstructed = read_wav(dir / "reconstructed.wav");
    if (static_cast<int>(reconstructed.samples.size()) < total)
      throw DataError("stored reconstruction shorter than the run");
    report.correlation = pearson(
        std::span<const double>(reconstructed.samples.data(), total),
        std::span<const double>(scenario.recording.samples.data(), total));
    result.variants.push_back(std::move(report));
  }

  write_reports(cfg, scenario, result, out_dir);
  return result;
}

void report_plots(const ScenarioConfig& cfg, const std::filesystem::path& run_dir,
                  const std::filesystem::path& out_dir) {
  cfg.validate();
  std::filesystem::create_directories(out_dir);

  const CsvTable curve = read_csv(run_dir / "nm_curve.csv");
  const int pcol = curve.column("p");
  const int lcol = curve.column("l_p");

  for (const std::string& key : cfg.variants) {
    const int nmcol = curve.column("nm_db_" + key);
    CsvWriter writer(out_dir / ("plot_nm_" + key + ".csv"), {"p", "l_p", "nm_db"});
    for (const auto& row : curve.rows) writer.row({row[pcol], row[lcol], row[nmcol]});
  }

  // Per-segment velocity profile (the lower panel companion to the NM plot).
  Trajectory traj;
  if (cfg.mode == "synthetic") {
    std::vector<Point3> waypoints;
    for (const auto& w : cfg.trajectory.waypoints) waypoints.push_back(to_point(w));
    traj = Trajectory::from_waypoints(waypoints, cfg.trajectory.speeds,
                                      SampleClock(cfg.sample_rate));
  } else {
    traj = prepare_scenario(cfg).trajectory;
  }
  CsvWriter writer(out_dir / "plot_velocity.csv",
                   {"segment", "l_start", "l_end", "velocity"});
  for (const Segment& seg : traj.segments)
    writer.row({std::to_string(seg.index), std::to_string(seg.l_start),
                std::to_string(seg.l_end), format_double(seg.velocity)});

  std::ifstream in(run_dir / "correlations.json", std::ios::binary);
  if (in) {
    std::ofstream out(out_dir / "plot_summary.json", std::ios::binary);
    out << in.rdbuf();
  }
}

}  // namespace rirtrack
