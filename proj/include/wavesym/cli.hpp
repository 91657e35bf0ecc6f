#pragma once

#include <string>
#include <vector>

#include "wavesym/types.hpp"

namespace wavesym {

struct RunConfig {
  std::string mode = "lines";  // lines | segments | ellipses | eval
  std::vector<std::string> inputs;
  std::string ground_truth;
  std::string out_dir = "out";

  int n_alpha = 32;
  std::vector<double> betas{-kPi / 4, 0.0, kPi / 4};
  double d_min = 6.0;
  double d_max = 0.0;  // <= 0: auto, 0.8 * max resized dimension
  double d_step = 2.0;
  double exponent = 2.0;
  double wavelength = 8.0;
  double sigma = 4.0;
  int support = 17;

  int haar_size = 20;
  int resize_max = 200;
  int max_detections = 5;
  double threshold = 0.1;
  double nms_rho = 2 * kPi / 32;
  double nms_delta = 10.0;
  bool refine = false;
  bool emit_heatmap = false;

  std::vector<double> sweep_thresholds;  // eval mode; empty: 0.1..1.0 step 0.1
  int top_k = 0;                         // eval mode; > 0 switches to a top-k sweep
};

// executes the configured pipeline; returns a process exit status
// (0 ok, 2 invalid arguments, 3 I/O error, 4 malformed file, 1 other)
int run(const RunConfig& config);

}  // namespace wavesym
