#include <fmt/format.h>

#include <ostream>

#include "dualrail/propagator.hpp"

namespace dualrail {

void write_trajectory_csv(std::ostream& out, const LevelBasis& basis, const std::vector<Sample>& samples) {
  std::string line = "t_us";
  for (const auto& l : basis.labels()) line += ",pop_" + l;
  for (const auto& l : basis.labels()) line += ",phase_" + l;
  out << line << '\n';
  for (const auto& s : samples) {
    line = fmt::format("{:.12g}", s.t);
    for (Eigen::Index i = 0; i < s.amplitudes.size(); ++i) line += fmt::format(",{:.12g}", std::norm(s.amplitudes(i)));
    for (Eigen::Index i = 0; i < s.amplitudes.size(); ++i) {
      line += fmt::format(",{:.12g}", principal_phase(s.amplitudes(i)));
    }
    out << line << '\n';
  }
}

}  // namespace dualrail
