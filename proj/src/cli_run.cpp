#include "wavesym/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <set>

#include "wavesym/detect.hpp"
#include "wavesym/eval.hpp"
#include "wavesym/image_io.hpp"

namespace fs = std::filesystem;

namespace wavesym {

namespace {

std::string fmt6(double v) {
  if (v == 0.0) v = 0.0;  // canonicalize -0
  char b[64];
  std::snprintf(b, sizeof b, "%.6f", v);
  return b;
}

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if ((unsigned char)c < 0x20) {
          char b[8];
          std::snprintf(b, sizeof b, "\\u%04x", c);
          out += b;
        } else {
          out += c;
        }
    }
  }
  return out;
}

void write_bytes(const std::string& path, const std::string& data) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw io_error(path + ": cannot open for writing");
  std::fwrite(data.data(), 1, data.size(), f);
  std::fclose(f);
}

struct ImageResult {
  std::string input;
  double scale = 1.0;
  int width = 0;
  int height = 0;
  std::vector<SymmetryLine> lines;
  std::vector<SymmetrySegment> segments;
  std::vector<CenterPoint> centers;
};

std::string detections_json(const ImageResult& r, const std::string& mode) {
  std::string j;
  j += "{\n";
  j += "  \"image\": \"" + json_escape(r.input) + "\",\n";
  j += "  \"mode\": \"" + mode + "\",\n";
  j += "  \"scale\": " + fmt6(r.scale) + ",\n";
  j += "  \"width\": " + std::to_string(r.width) + ",\n";
  j += "  \"height\": " + std::to_string(r.height) + ",\n";
  j += "  \"lines\": [";
  for (size_t i = 0; i < r.lines.size(); ++i) {
    j += i ? ",\n    " : "\n    ";
    j += "{\"rho\": " + fmt6(r.lines[i].rho) + ", \"delta\": " + fmt6(r.lines[i].delta) +
         ", \"score\": " + fmt6(r.lines[i].score) + "}";
  }
  j += r.lines.empty() ? "],\n" : "\n  ],\n";
  j += "  \"segments\": [";
  for (size_t i = 0; i < r.segments.size(); ++i) {
    const auto& s = r.segments[i];
    j += i ? ",\n    " : "\n    ";
    j += "{\"ax\": " + fmt6(s.endpoint_a.x()) + ", \"ay\": " + fmt6(s.endpoint_a.y()) +
         ", \"bx\": " + fmt6(s.endpoint_b.x()) + ", \"by\": " + fmt6(s.endpoint_b.y()) +
         ", \"score\": " + fmt6(s.line.score) + "}";
  }
  j += r.segments.empty() ? "],\n" : "\n  ],\n";
  j += "  \"centers\": [";
  for (size_t i = 0; i < r.centers.size(); ++i) {
    j += i ? ",\n    " : "\n    ";
    j += "{\"x\": " + fmt6(r.centers[i].position.x()) + ", \"y\": " +
         fmt6(r.centers[i].position.y()) + ", \"score\": " + fmt6(r.centers[i].score) + "}";
  }
  j += r.centers.empty() ? "]\n" : "\n  ]\n";
  j += "}\n";
  return j;
}

SweepParams sweep_from(const RunConfig& cfg, int W, int H) {
  SweepParams sp;
  sp.n_alpha = cfg.n_alpha;
  sp.betas = cfg.betas;
  // ellipse mode needs beta = 0; swap it in unless the caller overrode the default set
  if (cfg.mode == "ellipses" && cfg.betas == RunConfig{}.betas) sp.betas = {0.0};
  const double dmax = cfg.d_max > 0 ? cfg.d_max : 0.8 * std::max(W, H);
  if (!(cfg.d_step > 0)) throw std::invalid_argument("d_step must be positive");
  for (double d = cfg.d_min; d <= dmax + 1e-9; d += cfg.d_step) sp.distances.push_back(d);
  sp.exponent = cfg.exponent;
  sp.wavelet = {cfg.wavelength, cfg.sigma, cfg.support};
  return sp;
}

void validate(const RunConfig& cfg) {
  static const std::set<std::string> modes{"lines", "segments", "ellipses", "eval"};
  if (!modes.count(cfg.mode)) throw std::invalid_argument("unknown mode '" + cfg.mode + "'");
  if (cfg.inputs.empty()) throw std::invalid_argument("no input images given");
  if (cfg.resize_max < 32) throw std::invalid_argument("resize-max must be >= 32");
  if (cfg.mode == "eval" && cfg.ground_truth.empty())
    throw std::invalid_argument("eval mode requires --ground-truth");
  if (cfg.haar_size < 2 || cfg.haar_size % 2)
    throw std::invalid_argument("haar-size must be even and >= 2");
}

std::string output_dir_for(const RunConfig& cfg, const std::string& input,
                           std::set<std::string>& used) {
  if (cfg.inputs.size() == 1) return cfg.out_dir;
  std::string stem = fs::path(input).stem().string();
  if (stem.empty()) stem = "image";
  std::string name = stem;
  for (int k = 2; used.count(name); ++k) name = stem + "_" + std::to_string(k);
  used.insert(name);
  return (fs::path(cfg.out_dir) / name).string();
}

int run_impl(const RunConfig& cfg) {
  validate(cfg);
  fs::create_directories(cfg.out_dir);

  PeakParams pk{cfg.max_detections, cfg.nms_rho, cfg.nms_delta, cfg.threshold};
  const HaarKernel haar = make_haar(cfg.haar_size);

  std::vector<std::pair<std::string, std::vector<GroundTruthSegment>>> gt;
  if (cfg.mode == "eval") gt = load_ground_truth(cfg.ground_truth, 1.0);

  std::vector<EvalCase<SymmetrySegment>> cases;
  std::set<std::string> used_names;
  for (const std::string& input : cfg.inputs) {
    LoadedImage li = load_image(input, cfg.resize_max);
    const int H = int(li.image.rows()), W = int(li.image.cols());
    ImageResult res{input, li.scale, W, H, {}, {}, {}};
    SweepParams sp = sweep_from(cfg, W, H);

    Image heat;
    if (cfg.mode == "ellipses") {
      CenterLikelihoodMap map = accumulate_centers(li.image, sp);
      res.centers = extract_centers(map, pk);
      heat = std::move(map);
    } else {
      LineAccumulator acc = accumulate_lines(li.image, sp);
      res.lines = extract_lines(acc, pk);
      if (cfg.refine) res.lines = refine_line_scores(li.image, res.lines, sp);
      if (cfg.mode != "lines") res.segments = extract_segments(li.image, res.lines, sp, haar);
      heat = std::move(acc.votes);
    }

    const std::string dir = output_dir_for(cfg, input, used_names);
    fs::create_directories(dir);
    write_bytes((fs::path(dir) / "detections.json").string(), detections_json(res, cfg.mode));
    if (cfg.emit_heatmap) save_pgm16((fs::path(dir) / "accumulator.pgm").string(), heat);

    if (cfg.mode == "eval") {
      const std::string stem = fs::path(input).stem().string();
      EvalCase<SymmetrySegment> c;
      c.detections = res.segments;
      for (const auto& [id, segs] : gt)
        if (id == stem)
          for (GroundTruthSegment g : segs) {
            g.endpoint_a *= li.scale;
            g.endpoint_b *= li.scale;
            c.ground_truths.push_back(g);
          }
      cases.push_back(std::move(c));
    }
  }

  if (cfg.mode == "eval") {
    PRSweep sweep;
    if (cfg.top_k > 0) {
      sweep.mode = PRSweep::Mode::top_k;
      sweep.values.clear();
      for (int k = 1; k <= cfg.top_k; ++k) sweep.values.push_back(double(k));
    } else if (!cfg.sweep_thresholds.empty()) {
      sweep.values = cfg.sweep_thresholds;
    }
    std::string csv = "sweep,precision,recall,tp,fp,fn\n";
    for (const PRPoint& p : pr_curve(cases, sweep)) {
      csv += fmt6(p.sweep) + "," + fmt6(p.precision) + "," + fmt6(p.recall) + "," +
             std::to_string(p.tp) + "," + std::to_string(p.fp) + "," + std::to_string(p.fn) +
             "\n";
    }
    write_bytes((fs::path(cfg.out_dir) / "pr.csv").string(), csv);
  }
  return 0;
}

}  // namespace

int run(const RunConfig& config) {
  try {
    return run_impl(config);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const io_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const format_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

}  // namespace wavesym
