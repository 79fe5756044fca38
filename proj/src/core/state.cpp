#include "dualrail/state.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <set>

#include "dualrail/errors.hpp"

namespace dualrail {

LevelBasis::LevelBasis(std::vector<std::string> labels, std::vector<bool> rydberg)
    : labels_(std::move(labels)), rydberg_(std::move(rydberg)) {
  if (labels_.size() != rydberg_.size()) throw DomainError("LevelBasis: label and rydberg mask sizes differ");
  std::set<std::string> seen(labels_.begin(), labels_.end());
  if (seen.size() != labels_.size()) throw DomainError("LevelBasis: duplicate level label");
}

int LevelBasis::index(std::string_view label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw LookupError(fmt::format("unknown level '{}'", label));
  return static_cast<int>(it - labels_.begin());
}

bool LevelBasis::contains(std::string_view label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

ComplexState ComplexState::basis_state(const LevelBasis& basis, std::string_view label) {
  ComplexState s{basis, Eigen::VectorXcd::Zero(basis.size())};
  s.amplitudes(basis.index(label)) = 1.0;
  return s;
}

}  // namespace dualrail
