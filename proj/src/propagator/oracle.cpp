#include <cmath>

#include "dualrail/errors.hpp"
#include "dualrail/propagator.hpp"

namespace dualrail {

ComplexState evolve_oracle(const ComplexState& state, const Hamiltonian& h, double t0, double t1, int n_steps) {
  if (n_steps < 1) throw DomainError("oracle needs at least one slice");
  if (t1 < t0) throw DomainError("evolution end time precedes start time");
  const double dt = (t1 - t0) / n_steps;
  Eigen::VectorXcd y = state.amplitudes;
  Eigen::MatrixXcd hm(h.dim(), h.dim());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h.dim());
  for (int s = 0; s < n_steps; ++s) {
    h.fill(t0 + (s + 0.5) * dt, hm);
    eig.compute(hm);
    Eigen::VectorXcd c = eig.eigenvectors().adjoint() * y;
    for (int m = 0; m < c.size(); ++m) {
      const double a = eig.eigenvalues()(m) * dt;
      c(m) *= cplx(std::cos(a), -std::sin(a));
    }
    y = eig.eigenvectors() * c;
  }
  return ComplexState{state.basis, y};
}

}  // namespace dualrail
