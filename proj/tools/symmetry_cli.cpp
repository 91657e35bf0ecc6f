#include <string>

#include "CLI11.hpp"
#include "wavesym/cli.hpp"

namespace {

std::vector<double> split_doubles(const std::string& s) {
  std::vector<double> out;
  size_t pos = 0;
  while (pos <= s.size()) {
    size_t comma = s.find(',', pos);
    if (comma == std::string::npos) comma = s.size();
    const std::string tok = s.substr(pos, comma - pos);
    if (!tok.empty()) out.push_back(std::stod(tok));
    pos = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  wavesym::RunConfig cfg;
  std::string betas_arg, sweep_arg;

  CLI::App app{"Reflection-symmetry line/segment and ellipse-center detector"};
  app.add_option("--mode", cfg.mode, "lines | segments | ellipses | eval")
      ->check(CLI::IsMember({"lines", "segments", "ellipses", "eval"}))
      ->capture_default_str();
  app.add_option("--input", cfg.inputs, "input image(s), PNG or PGM")->required();
  app.add_option("--ground-truth", cfg.ground_truth, "ground-truth CSV (eval mode)");
  app.add_option("--out", cfg.out_dir, "output directory")->capture_default_str();

  app.add_option("--n-alpha", cfg.n_alpha, "number of outer angles")->capture_default_str();
  app.add_option("--betas", betas_arg, "comma-separated inner angles (default -0.7854,0,0.7854)");
  app.add_option("--d-min", cfg.d_min, "smallest inner distance")->capture_default_str();
  app.add_option("--d-max", cfg.d_max, "largest inner distance (<= 0: 0.8 x max dimension)")
      ->capture_default_str();
  app.add_option("--d-step", cfg.d_step, "inner distance step")->capture_default_str();
  app.add_option("--exponent", cfg.exponent, "aggregate coefficient exponent")
      ->capture_default_str();
  app.add_option("--wavelength", cfg.wavelength, "wavelet wavelength")->capture_default_str();
  app.add_option("--sigma", cfg.sigma, "wavelet envelope sigma")->capture_default_str();
  app.add_option("--support", cfg.support, "wavelet support (odd)")->capture_default_str();

  app.add_option("--haar-size", cfg.haar_size, "Haar kernel size for endpoints")
      ->capture_default_str();
  app.add_option("--resize-max", cfg.resize_max, "resize so max dimension equals this")
      ->capture_default_str();
  app.add_option("--max-detections", cfg.max_detections, "detections kept per image")
      ->capture_default_str();
  app.add_option("--threshold", cfg.threshold, "peak threshold as fraction of global max")
      ->capture_default_str();
  app.add_option("--nms-rho", cfg.nms_rho, "NMS window in rho, radians")->capture_default_str();
  app.add_option("--nms-delta", cfg.nms_delta, "NMS window in delta, pixels")
      ->capture_default_str();
  app.add_flag("--refine", cfg.refine, "rescore lines with the robust top-5 statistic");
  app.add_flag("--emit-heatmap", cfg.emit_heatmap, "write accumulator.pgm");

  app.add_option("--sweep-thresholds", sweep_arg,
                 "comma-separated eval sweep thresholds (default 0.1..1.0)");
  app.add_option("--top-k", cfg.top_k, "eval sweep over top-k detections instead of thresholds")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
    if (app.count("--betas")) cfg.betas = split_doubles(betas_arg);
    if (app.count("--sweep-thresholds")) cfg.sweep_thresholds = split_doubles(sweep_arg);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the parser's message
    return 2;     // any command-line problem maps to the invalid-arguments status
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return wavesym::run(cfg);
}
