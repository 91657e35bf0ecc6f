#pragma once

#include <numeric>
#include <string>
#include <tuple>

#include "wavesym/detect.hpp"

namespace wavesym {

struct GroundTruthSegment {
  Eigen::Vector2d endpoint_a;
  Eigen::Vector2d endpoint_b;

  // derived on demand, never stored
  double angle() const {
    return wrap_half_turn(std::atan2(endpoint_b.y() - endpoint_a.y(),
                                     endpoint_b.x() - endpoint_a.x()));
  }
  Eigen::Vector2d center() const { return (endpoint_a + endpoint_b) / 2; }
  double length() const { return (endpoint_b - endpoint_a).norm(); }
};

struct MatchResult {
  int tp = 0;
  int fp = 0;
  int fn = 0;
  std::vector<std::pair<int, int>> pairs;  // (detection index, ground-truth index)
};

struct PRPoint {
  double sweep{};
  double precision{};
  double recall{};
  int tp = 0;
  int fp = 0;
  int fn = 0;
};

struct PRSweep {
  enum class Mode { threshold, top_k };
  Mode mode = Mode::threshold;
  // threshold mode: fractions of the per-image top score; top_k mode: detection counts
  std::vector<double> values{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
};

inline double segment_angle(const SymmetrySegment& s) {
  return wrap_half_turn(std::atan2(s.endpoint_b.y() - s.endpoint_a.y(),
                                   s.endpoint_b.x() - s.endpoint_a.x()));
}

constexpr double kTpAngleLimit = 10.0 * kPi / 180.0;

inline bool is_tp_segment(const SymmetrySegment& det, const GroundTruthSegment& gt) {
  if (acute_angle_diff(segment_angle(det), gt.angle()) >= kTpAngleLimit) return false;
  const double dist = (gt.center() - det.center).norm();
  return dist < std::min(gt.length(), det.length) / 5;
}

inline bool is_tp_line(const SymmetryLine& det, const GroundTruthSegment& gt) {
  if (acute_angle_diff(det.rho, gt.angle()) >= kTpAngleLimit) return false;
  const Eigen::Vector2d n{std::sin(det.rho), -std::cos(det.rho)};
  return std::abs(gt.center().dot(n) - det.delta) < gt.length() / 5;
}

namespace detail {

inline double det_score(const SymmetrySegment& d) { return d.line.score; }
inline double det_score(const SymmetryLine& d) { return d.score; }
inline bool det_is_tp(const SymmetrySegment& d, const GroundTruthSegment& g) {
  return is_tp_segment(d, g);
}
inline bool det_is_tp(const SymmetryLine& d, const GroundTruthSegment& g) {
  return is_tp_line(d, g);
}

// canonical order among equal scores, so matching is permutation-invariant
inline bool det_key_less(const SymmetrySegment& a, const SymmetrySegment& b) {
  auto key = [](const SymmetrySegment& s) {
    return std::make_tuple(s.endpoint_a.x(), s.endpoint_a.y(), s.endpoint_b.x(),
                           s.endpoint_b.y());
  };
  return key(a) < key(b);
}
inline bool det_key_less(const SymmetryLine& a, const SymmetryLine& b) {
  return std::make_tuple(a.rho, a.delta) < std::make_tuple(b.rho, b.delta);
}

}  // namespace detail

// greedy one-to-one matching in descending score order; each detection claims
// the lowest-index unclaimed ground truth it satisfies the criterion against
template <class Det>
MatchResult match(const std::vector<Det>& detections,
                  const std::vector<GroundTruthSegment>& ground_truths) {
  std::vector<int> order(detections.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double sa = detail::det_score(detections[size_t(a)]);
    const double sb = detail::det_score(detections[size_t(b)]);
    if (sa != sb) return sa > sb;
    return detail::det_key_less(detections[size_t(a)], detections[size_t(b)]);
  });

  MatchResult res;
  std::vector<bool> claimed(ground_truths.size(), false);
  for (int di : order) {
    for (size_t gi = 0; gi < ground_truths.size(); ++gi) {
      if (claimed[gi]) continue;
      if (detail::det_is_tp(detections[size_t(di)], ground_truths[gi])) {
        claimed[gi] = true;
        res.pairs.emplace_back(di, int(gi));
        break;
      }
    }
  }
  res.tp = int(res.pairs.size());
  res.fp = int(detections.size()) - res.tp;
  res.fn = int(ground_truths.size()) - res.tp;
  return res;
}

inline double precision_of(int tp, int fp) { return tp + fp == 0 ? 1.0 : double(tp) / (tp + fp); }
inline double recall_of(int tp, int fn) { return tp + fn == 0 ? 1.0 : double(tp) / (tp + fn); }

template <class Det>
struct EvalCase {
  std::vector<Det> detections;
  std::vector<GroundTruthSegment> ground_truths;
};

// one PRPoint per sweep value, aggregating matched counts over all images;
// threshold mode retains detections scoring >= value * per-image top score
template <class Det>
std::vector<PRPoint> pr_curve(const std::vector<EvalCase<Det>>& cases, const PRSweep& sweep) {
  if (cases.empty()) throw std::invalid_argument("pr_curve: empty dataset");
  if (sweep.values.empty()) throw std::invalid_argument("pr_curve: empty sweep");

  std::vector<PRPoint> out;
  for (double value : sweep.values) {
    PRPoint pt;
    pt.sweep = value;
    for (const auto& image : cases) {
      std::vector<Det> retained;
      if (sweep.mode == PRSweep::Mode::threshold) {
        double top = 0;
        for (const Det& d : image.detections) top = std::max(top, detail::det_score(d));
        for (const Det& d : image.detections)
          if (detail::det_score(d) >= value * top) retained.push_back(d);
      } else {
        retained = image.detections;
        std::sort(retained.begin(), retained.end(), [](const Det& a, const Det& b) {
          const double sa = detail::det_score(a), sb = detail::det_score(b);
          if (sa != sb) return sa > sb;
          return detail::det_key_less(a, b);
        });
        const size_t k = size_t(std::max(0.0, value));
        if (retained.size() > k) retained.resize(k);
      }
      MatchResult m = match(retained, image.ground_truths);
      pt.tp += m.tp;
      pt.fp += m.fp;
      pt.fn += m.fn;
    }
    pt.precision = precision_of(pt.tp, pt.fp);
    pt.recall = recall_of(pt.tp, pt.fn);
    out.push_back(pt);
  }
  return out;
}

// segment whose carrier line parameters and score are derived from endpoints
inline SymmetrySegment segment_from_endpoints(Eigen::Vector2d a, Eigen::Vector2d b,
                                              double score) {
  SymmetrySegment s;
  s.endpoint_a = a;
  s.endpoint_b = b;
  s.center = (a + b) / 2;
  s.length = (b - a).norm();
  const double rho = wrap_half_turn(std::atan2(b.y() - a.y(), b.x() - a.x()));
  const Eigen::Vector2d n{std::sin(rho), -std::cos(rho)};
  s.line = {rho, s.center.dot(n), score};
  return s;
}

// rows: image_id,ax,ay,bx,by — endpoints scaled by `scale`, grouped by image
// id in first-appearance order
std::vector<std::pair<std::string, std::vector<GroundTruthSegment>>> load_ground_truth(
    const std::string& path, double scale = 1.0);

}  // namespace wavesym
