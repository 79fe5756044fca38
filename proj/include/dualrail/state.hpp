#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <string_view>
#include <vector>

namespace dualrail {

using cplx = std::complex<double>;

/// Ordered level labels. `rydberg` marks the levels whose occupation counts as
/// single-Rydberg residence time.
class LevelBasis {
 public:
  LevelBasis() = default;
  /// Throws DomainError on duplicate labels or a size mismatch.
  LevelBasis(std::vector<std::string> labels, std::vector<bool> rydberg);

  int size() const { return static_cast<int>(labels_.size()); }
  const std::string& label(int i) const { return labels_.at(static_cast<std::size_t>(i)); }
  const std::vector<std::string>& labels() const { return labels_; }
  bool is_rydberg(int i) const { return rydberg_.at(static_cast<std::size_t>(i)); }
  const std::vector<bool>& rydberg_mask() const { return rydberg_; }

  /// Throws LookupError for an unknown label.
  int index(std::string_view label) const;
  bool contains(std::string_view label) const;

  bool operator==(const LevelBasis& other) const = default;

 private:
  std::vector<std::string> labels_;
  std::vector<bool> rydberg_;
};

struct ComplexState {
  LevelBasis basis;
  Eigen::VectorXcd amplitudes;

  /// |label> in `basis`.
  static ComplexState basis_state(const LevelBasis& basis, std::string_view label);

  cplx amplitude(std::string_view label) const { return amplitudes(basis.index(label)); }
  double population(std::string_view label) const { return std::norm(amplitude(label)); }
  double norm() const { return amplitudes.norm(); }
};

}  // namespace dualrail
