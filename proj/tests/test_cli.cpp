#include "wavesym/cli.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "json.hpp"
#include "wavesym/detect.hpp"
#include "wavesym/image_io.hpp"

using namespace wavesym;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// fresh scratch directory per test case
struct Scratch {
  fs::path dir;
  explicit Scratch(const std::string& name) : dir(fs::path("cli_scratch") / name) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string operator/(const std::string& leaf) const { return (dir / leaf).string(); }
};

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

json read_json(const std::string& path) { return json::parse(read_file(path)); }

RunConfig small_config(const std::string& input, const std::string& out) {
  RunConfig cfg;
  cfg.inputs = {input};
  cfg.out_dir = out;
  cfg.d_max = 40;  // keep unit-test sweeps small
  return cfg;
}

}  // namespace

TEST_CASE("repeated runs produce byte-identical detections") {
  Scratch s("determinism");
  const std::string img = s / "strip.pgm";
  save_pgm16(img, fixtures::mirrored_strip(64, 65, 20, 44, 7));

  RunConfig cfg = small_config(img, s / "out_a");
  cfg.mode = "segments";
  REQUIRE(run(cfg) == 0);
  cfg.out_dir = s / "out_b";
  REQUIRE(run(cfg) == 0);

  const std::string a = read_file(s / "out_a/detections.json");
  const std::string b = read_file(s / "out_b/detections.json");
  CHECK(a == b);
  CHECK(!a.empty());
}

TEST_CASE("detections.json carries fields in the documented order") {
  Scratch s("field_order");
  const std::string img = s / "noise.pgm";
  save_pgm16(img, fixtures::uniform_image(48, 48, 3));

  RunConfig cfg = small_config(img, s / "out");
  REQUIRE(run(cfg) == 0);
  const std::string text = read_file(s / "out/detections.json");
  size_t last = 0;
  // keys searched with the trailing colon; "lines" alone would also match the
  // mode value string
  for (const char* key : {"\"image\":", "\"mode\":", "\"scale\":", "\"width\":", "\"height\":",
                          "\"lines\":", "\"segments\":", "\"centers\":"}) {
    const size_t pos = text.find(key);
    REQUIRE(pos != std::string::npos);
    CHECK(pos > last);
    last = pos;
  }
}

TEST_CASE("ellipse mode reports both disk centers within two pixels") {
  Scratch s("ellipses");
  const std::string img = s / "disks.pgm";
  Image two = fixtures::disk(128, 128, 40, 64, 16);
  two = fixtures::disk(128, 128, 90, 64, 16, std::move(two));
  save_pgm16(img, two);

  RunConfig cfg = small_config(img, s / "out");
  cfg.mode = "ellipses";
  cfg.d_min = 27;
  cfg.d_max = 37;
  cfg.d_step = 5;
  cfg.max_detections = 2;
  REQUIRE(run(cfg) == 0);

  const json doc = read_json(s / "out/detections.json");
  CHECK(doc["mode"] == "ellipses");
  CHECK(doc["scale"] == doctest::Approx(1.0));
  REQUIRE(doc["centers"].size() == 2);
  CHECK(doc["lines"].empty());
  CHECK(doc["segments"].empty());

  const Eigen::Vector2d truth[2] = {{40, 64}, {90, 64}};
  bool hit[2] = {false, false};
  for (const auto& c : doc["centers"]) {
    const Eigen::Vector2d p{c["x"].get<double>(), c["y"].get<double>()};
    for (int i = 0; i < 2; ++i)
      if (!hit[i] && (p - truth[i]).norm() <= 2.0) {
        hit[i] = true;
        break;
      }
  }
  CHECK(hit[0]);
  CHECK(hit[1]);
}

TEST_CASE("custom betas are rejected in ellipse mode unless they are {0}") {
  Scratch s("ellipse_betas");
  const std::string img = s / "disk.pgm";
  save_pgm16(img, fixtures::disk(64, 64, 32, 32, 12));

  RunConfig cfg = small_config(img, s / "out");
  cfg.mode = "ellipses";
  cfg.d_min = 19;
  cfg.d_max = 29;
  cfg.d_step = 5;
  cfg.betas = {0.1};
  CHECK(run(cfg) == 2);

  cfg.betas = {0.0};
  CHECK(run(cfg) == 0);
}

TEST_CASE("eval against its own detections is a perfect score at threshold zero") {
  Scratch s("eval_self");
  const std::string img = s / "strip.pgm";
  save_pgm16(img, fixtures::mirrored_strip(64, 65, 18, 46, 11));

  RunConfig cfg = small_config(img, s / "seg_out");
  cfg.mode = "segments";
  REQUIRE(run(cfg) == 0);
  const json doc = read_json(s / "seg_out/detections.json");
  REQUIRE(!doc["segments"].empty());

  const std::string gt_path = s / "gt.csv";
  {
    std::ofstream gt(gt_path);
    for (const auto& seg : doc["segments"])
      gt << "strip," << seg["ax"].get<double>() << "," << seg["ay"].get<double>() << ","
         << seg["bx"].get<double>() << "," << seg["by"].get<double>() << "\n";
  }

  cfg.mode = "eval";
  cfg.ground_truth = gt_path;
  cfg.out_dir = s / "eval_out";
  cfg.sweep_thresholds = {0.0};
  REQUIRE(run(cfg) == 0);

  std::istringstream csv(read_file(s / "eval_out/pr.csv"));
  std::string header, row;
  REQUIRE(std::getline(csv, header));
  CHECK(header == "sweep,precision,recall,tp,fp,fn");
  REQUIRE(std::getline(csv, row));
  CHECK(row.rfind("0.000000,1.000000,1.000000,", 0) == 0);
}

TEST_CASE("process exit statuses map the failure modes") {
  Scratch s("exit_codes");
  const std::string img = s / "ok.pgm";
  save_pgm16(img, fixtures::uniform_image(48, 48, 5));

  RunConfig cfg = small_config(s / "missing.pgm", s / "out");
  CHECK(run(cfg) == 3);  // unreadable input

  cfg = small_config(img, s / "out");
  cfg.mode = "circles";
  CHECK(run(cfg) == 2);  // unknown mode

  cfg = small_config(img, s / "out");
  cfg.resize_max = 16;
  CHECK(run(cfg) == 2);

  cfg = small_config(img, s / "out");
  cfg.mode = "eval";
  CHECK(run(cfg) == 2);  // eval without ground truth

  cfg = small_config(img, s / "out");
  cfg.d_step = 0;
  CHECK(run(cfg) == 2);

  cfg = small_config(img, s / "out");
  cfg.haar_size = 7;
  CHECK(run(cfg) == 2);

  const std::string bad_gt = s / "bad.csv";
  {
    std::ofstream f(bad_gt);
    f << "ok,1,2,3\n";  // too few fields
  }
  cfg = small_config(img, s / "out");
  cfg.mode = "eval";
  cfg.ground_truth = bad_gt;
  CHECK(run(cfg) == 4);
}

TEST_CASE("the accumulator heatmap is written as a loadable 16-bit PGM") {
  Scratch s("heatmap");
  const std::string img = s / "strip.pgm";
  save_pgm16(img, fixtures::mirrored_strip(64, 65, 20, 44, 7));

  RunConfig cfg = small_config(img, s / "out");
  cfg.emit_heatmap = true;
  REQUIRE(run(cfg) == 0);

  const Image heat = load_image_raw(s / "out/accumulator.pgm");
  CHECK(heat.rows() == 32);       // one row per angle bin
  CHECK(heat.cols() > 2 * 64);    // delta axis spans the image diagonal both ways
  CHECK(heat.maxCoeff() == doctest::Approx(1.0));
}

TEST_CASE("multiple inputs get per-stem output directories with deduplication") {
  Scratch s("multi");
  fs::create_directories(s.dir / "other");
  const Image im = fixtures::uniform_image(40, 40, 9);
  save_pgm16(s / "a.pgm", im);
  save_pgm16(s / "b.pgm", im);
  save_pgm16((s.dir / "other" / "a.pgm").string(), im);

  RunConfig cfg;
  cfg.inputs = {s / "a.pgm", s / "b.pgm", (s.dir / "other" / "a.pgm").string()};
  cfg.out_dir = s / "out";
  cfg.d_max = 30;
  REQUIRE(run(cfg) == 0);

  CHECK(fs::exists(s.dir / "out/a/detections.json"));
  CHECK(fs::exists(s.dir / "out/b/detections.json"));
  CHECK(fs::exists(s.dir / "out/a_2/detections.json"));
}

TEST_CASE("serialized detections round-trip the in-process results") {
  Scratch s("roundtrip");
  const std::string img_path = s / "strip.pgm";
  const Image img = fixtures::mirrored_strip(64, 65, 20, 44, 7);
  save_pgm16(img_path, img);

  RunConfig cfg = small_config(img_path, s / "out");
  cfg.mode = "lines";
  REQUIRE(run(cfg) == 0);
  const json doc = read_json(s / "out/detections.json");
  CHECK(doc["image"] == img_path);
  CHECK(doc["width"] == 65);
  CHECK(doc["height"] == 64);

  // the image re-loads quantized; rebuild the sweep on the loaded pixels
  const Image loaded = load_image(img_path, cfg.resize_max).image;
  SweepParams sp;
  sp.betas = cfg.betas;
  for (double d = cfg.d_min; d <= cfg.d_max + 1e-9; d += cfg.d_step) sp.distances.push_back(d);
  const LineAccumulator acc = accumulate_lines(loaded, sp);
  const std::vector<SymmetryLine> lines = extract_lines(acc, PeakParams{});

  REQUIRE(doc["lines"].size() == lines.size());
  for (size_t i = 0; i < lines.size(); ++i) {
    // fields are printed with six decimals, so absolute error is at most 5e-7
    CHECK(std::abs(doc["lines"][i]["rho"].get<double>() - lines[i].rho) <= 1e-6);
    CHECK(std::abs(doc["lines"][i]["delta"].get<double>() - lines[i].delta) <= 1e-6);
    CHECK(std::abs(doc["lines"][i]["score"].get<double>() - lines[i].score) <= 1e-6);
  }
}
