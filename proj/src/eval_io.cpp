#include <cctype>
#include <fstream>
#include <sstream>

#include "wavesym/eval.hpp"

namespace wavesym {

std::vector<std::pair<std::string, std::vector<GroundTruthSegment>>> load_ground_truth(
    const std::string& path, double scale) {
  std::ifstream in(path);
  if (!in) throw io_error(path + ": cannot open ground-truth file");

  std::vector<std::pair<std::string, std::vector<GroundTruthSegment>>> out;
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    // skip blank lines and an optional header row
    if (line.empty()) continue;
    if (row == 1 && line.rfind("image_id", 0) == 0) continue;

    std::istringstream ss(line);
    std::string id, field;
    double v[4];
    bool ok = bool(std::getline(ss, id, ',')) && !id.empty();
    for (int i = 0; ok && i < 4; ++i) {
      if (!std::getline(ss, field, ',')) {
        ok = false;
        break;
      }
      try {
        size_t pos = 0;
        v[i] = std::stod(field, &pos);
        while (pos < field.size() && std::isspace((unsigned char)field[pos])) ++pos;
        if (pos != field.size()) ok = false;
      } catch (const std::exception&) {
        ok = false;
      }
    }
    if (ok && std::getline(ss, field, ',')) ok = false;  // trailing fields
    if (!ok)
      throw format_error(path + ": malformed ground-truth row " + std::to_string(row));

    GroundTruthSegment g{{v[0] * scale, v[1] * scale}, {v[2] * scale, v[3] * scale}};
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& p) { return p.first == id; });
    if (it == out.end()) {
      out.push_back({id, {g}});
    } else {
      it->second.push_back(g);
    }
  }
  return out;
}

}  // namespace wavesym
