#include "dualrail/propagator.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "dop853_tableau.hpp"
#include "dualrail/errors.hpp"
#include "dualrail/kernels.hpp"
#include "stage_run.hpp"

namespace dualrail {

namespace {

constexpr int kStages = 12;
constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 10.0;
constexpr double kErrorExponent = -1.0 / 8.0;
constexpr int kOrder = 7;

// Nonzero tableau rows, so the stage combinations skip structural zeros.
struct SparseRow {
  std::vector<double> coef;
  std::vector<int> idx;
};

SparseRow sparse(const double* row, int len) {
  SparseRow r;
  for (int j = 0; j < len; ++j) {
    if (row[j] != 0.0) {
      r.coef.push_back(row[j]);
      r.idx.push_back(j);
    }
  }
  return r;
}

struct Tableau {
  std::array<SparseRow, kStages> a;
  SparseRow b;
  SparseRow e3;
  SparseRow e5;
};

const Tableau& tableau() {
  static const Tableau t = [] {
    using namespace detail::dop853;
    const double* rows[] = {nullptr, kA1, kA2, kA3, kA4, kA5, kA6, kA7, kA8, kA9, kA10, kA11};
    Tableau out;
    for (int s = 1; s < kStages; ++s) out.a[static_cast<std::size_t>(s)] = sparse(rows[s], s);
    out.b = sparse(kB, kStages);
    out.e3 = sparse(kE3, kStages + 1);
    out.e5 = sparse(kE5, kStages + 1);
    return out;
  }();
  return t;
}

double rydberg_density(const Eigen::VectorXcd& y, const std::vector<bool>& mask) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (mask[static_cast<std::size_t>(i)]) sum += std::norm(y(i));
  }
  return sum;
}

double rms_scaled(const Eigen::VectorXcd& x, const Eigen::VectorXd& scale) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) sum += std::norm(x(i)) / (scale(i) * scale(i));
  return std::sqrt(sum / static_cast<double>(x.size()));
}

class Dop853 {
 public:
  Dop853(const Hamiltonian& h, const PropagatorOptions& options)
      : h_(h), opt_(options), kernels_(kernels::active_kernels()), n_(h.dim()), hbuf_(n_, n_), zero_(Eigen::VectorXcd::Zero(n_)) {
    for (auto& k : k_) k.resize(n_);
  }

  StageRun run(const Eigen::VectorXcd& y0, double t0, double t1, const std::vector<double>& sample_times,
               std::vector<Sample>* samples) {
    StageRun out;
    out.y = y0;
    if (t1 <= t0) return out;
    const auto& mask = h_.basis.rydberg_mask();
    double t = t0;
    Eigen::VectorXcd y = y0;
    Eigen::VectorXcd f(n_);
    rhs(t, y, f);
    double h_abs = initial_step(t, t1, y, f);
    double rydberg = 0.0;
    std::size_t next_sample = 0;
    Eigen::VectorXcd y_new(n_);
    Eigen::VectorXcd f_new(n_);

    while (t < t1) {
      const double min_step = 10.0 * std::abs(std::nextafter(t, std::numeric_limits<double>::infinity()) - t);
      h_abs = std::max(h_abs, min_step);
      bool rejected = false;
      double step = 0.0;
      double t_new = t;
      double rydberg_step = 0.0;
      for (;;) {
        if (h_abs < min_step) {
          throw IntegrationError(fmt::format("step size underflow at t = {:.12g} us (h = {:.3g})", t, h_abs), t, h_abs);
        }
        t_new = std::min(t + h_abs, t1);
        step = t_new - t;
        h_abs = step;
        rydberg_step = rk_step(t, y, f, step, y_new, f_new, mask);
        const double err = error_norm(step, y, y_new);
        if (err < 1.0) {
          double factor = err == 0.0 ? kMaxFactor : std::min(kMaxFactor, kSafety * std::pow(err, kErrorExponent));
          if (rejected) factor = std::min(1.0, factor);
          h_abs *= factor;
          break;
        }
        h_abs *= std::max(kMinFactor, kSafety * std::pow(err, kErrorExponent));
        rejected = true;
        ++out.rejected_steps;
      }
      ++out.steps;
      if (out.steps > opt_.max_steps) {
        throw IntegrationError(fmt::format("exceeded {} steps at t = {:.12g} us", opt_.max_steps, t), t, step);
      }
      if (samples != nullptr) {
        while (next_sample < sample_times.size() && sample_times[next_sample] <= t_new) {
          const double ts = sample_times[next_sample++];
          samples->push_back({ts, ts == t_new ? y_new : hermite(t, step, y, f, y_new, f_new, ts)});
        }
      }
      rydberg += rydberg_step;
      t = t_new;
      y.swap(y_new);
      f.swap(f_new);
    }
    out.y = y;
    out.rydberg_time = rydberg;
    out.evaluations = evaluations_;
    return out;
  }

 private:
  void rhs(double t, const Eigen::VectorXcd& y, Eigen::VectorXcd& out) {
    h_.fill(t, hbuf_);
    kernels_.apply_minus_i(hbuf_.data(), n_, y.data(), out.data());
    ++evaluations_;
  }

  void combine(const Eigen::VectorXcd& base, double step, const SparseRow& row, Eigen::VectorXcd& out) {
    std::array<const cplx*, kStages + 1> ptrs{};
    for (std::size_t j = 0; j < row.idx.size(); ++j) ptrs[j] = k_[static_cast<std::size_t>(row.idx[j])].data();
    kernels_.combine(n_, base.data(), step, static_cast<int>(row.idx.size()), row.coef.data(), ptrs.data(), out.data());
  }

  // Returns the Rydberg-time increment of the step.
  double rk_step(double t, const Eigen::VectorXcd& y, const Eigen::VectorXcd& f, double step, Eigen::VectorXcd& y_new,
                 Eigen::VectorXcd& f_new, const std::vector<bool>& mask) {
    const auto& tab = tableau();
    std::array<double, kStages> density{};
    k_[0] = f;
    density[0] = rydberg_density(y, mask);
    for (int s = 1; s < kStages; ++s) {
      combine(y, step, tab.a[static_cast<std::size_t>(s)], ytmp_);
      density[static_cast<std::size_t>(s)] = rydberg_density(ytmp_, mask);
      rhs(t + detail::dop853::kC[s] * step, ytmp_, k_[static_cast<std::size_t>(s)]);
    }
    combine(y, step, tab.b, y_new);
    rhs(t + step, y_new, f_new);
    k_[kStages] = f_new;
    double increment = 0.0;
    for (int s = 0; s < kStages; ++s) increment += detail::dop853::kB[s] * density[static_cast<std::size_t>(s)];
    return step * increment;
  }

  double error_norm(double step, const Eigen::VectorXcd& y, const Eigen::VectorXcd& y_new) {
    const auto& tab = tableau();
    combine(zero_, 1.0, tab.e5, err5_);
    combine(zero_, 1.0, tab.e3, err3_);
    double e5 = 0.0;
    double e3 = 0.0;
    for (int i = 0; i < n_; ++i) {
      const double scale = opt_.atol + std::max(std::abs(y(i)), std::abs(y_new(i))) * opt_.rtol;
      e5 += std::norm(err5_(i)) / (scale * scale);
      e3 += std::norm(err3_(i)) / (scale * scale);
    }
    if (e5 == 0.0 && e3 == 0.0) return 0.0;
    return std::abs(step) * e5 / std::sqrt((e5 + 0.01 * e3) * static_cast<double>(n_));
  }

  double initial_step(double t0, double t1, const Eigen::VectorXcd& y0, const Eigen::VectorXcd& f0) {
    const double length = t1 - t0;
    Eigen::VectorXd scale(n_);
    for (int i = 0; i < n_; ++i) scale(i) = opt_.atol + std::abs(y0(i)) * opt_.rtol;
    const double d0 = rms_scaled(y0, scale);
    const double d1 = rms_scaled(f0, scale);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, length);
    Eigen::VectorXcd y1 = y0 + h0 * f0;
    Eigen::VectorXcd f1(n_);
    rhs(t0 + h0, y1, f1);
    const double d2 = rms_scaled(f1 - f0, scale) / h0;
    const double h1 = (d1 <= 1e-15 && d2 <= 1e-15) ? std::max(1e-6, h0 * 1e-3)
                                                    : std::pow(0.01 / std::max(d1, d2), 1.0 / (kOrder + 1));
    return std::min({100.0 * h0, h1, length});
  }

  static Eigen::VectorXcd hermite(double t, double step, const Eigen::VectorXcd& y0, const Eigen::VectorXcd& f0,
                                  const Eigen::VectorXcd& y1, const Eigen::VectorXcd& f1, double ts) {
    const double s = (ts - t) / step;
    const double s2 = s * s;
    const double s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * step * f0 + (-2 * s3 + 3 * s2) * y1 +
           (s3 - s2) * step * f1;
  }

  const Hamiltonian& h_;
  const PropagatorOptions& opt_;
  const kernels::KernelSet& kernels_;
  int n_;
  Eigen::MatrixXcd hbuf_;
  Eigen::VectorXcd zero_;
  std::array<Eigen::VectorXcd, kStages + 1> k_;
  Eigen::VectorXcd ytmp_{n_};
  Eigen::VectorXcd err5_{n_};
  Eigen::VectorXcd err3_{n_};
  long evaluations_ = 0;
};

// Integral over [0, d] of exp(-i x tau), x = delta * d.
cplx phase_integral(double delta, double d) {
  const double x = delta * d;
  if (x == 0.0) return d;
  const double s = std::sin(0.5 * x);
  return d * cplx(std::sin(x) / x, -2.0 * s * s / x);
}

StageRun run_frame(const Hamiltonian& h, const Eigen::VectorXcd& y0, double t0, double t1,
                   const std::vector<double>& sample_times, std::vector<Sample>* samples) {
  const DopplerFrame& fr = *h.frame;
  const int n = h.dim();
  StageRun out;
  out.y = y0;
  if (t1 <= t0) return out;
  auto frame_phase = [&](double t) {
    Eigen::VectorXcd p(n);
    for (int j = 0; j < n; ++j) {
      const double theta = fr.phase0(j) + fr.rate(j) * t;
      p(j) = cplx(std::cos(theta), std::sin(theta));
    }
    return p;
  };
  Eigen::MatrixXcd generator = fr.h_static;
  generator.diagonal() += fr.rate.cast<cplx>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(generator);
  const Eigen::MatrixXcd& u = eig.eigenvectors();
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  const Eigen::VectorXcd coeff = u.adjoint() * y0.cwiseProduct(frame_phase(t0).conjugate());

  auto state_at = [&](double t) {
    const double tau = t - t0;
    Eigen::VectorXcd d(n);
    for (int m = 0; m < n; ++m) d(m) = coeff(m) * cplx(std::cos(lambda(m) * tau), -std::sin(lambda(m) * tau));
    return Eigen::VectorXcd((u * d).cwiseProduct(frame_phase(t)));
  };

  if (samples != nullptr) {
    for (double ts : sample_times) samples->push_back({ts, state_at(ts)});
  }
  out.y = state_at(t1);

  const auto& mask = h.basis.rydberg_mask();
  const double d = t1 - t0;
  Eigen::MatrixXcd overlap = Eigen::MatrixXcd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    if (mask[static_cast<std::size_t>(j)]) overlap += u.row(j).adjoint() * u.row(j);
  }
  double total = 0.0;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      // overlap(a, b) = sum_j conj(U_ja) U_jb
      total += (overlap(a, b) * std::conj(coeff(a)) * coeff(b) * phase_integral(lambda(b) - lambda(a), d)).real();
    }
  }
  out.rydberg_time = total;
  out.steps = 1;
  return out;
}

}  // namespace

StageRun integrate_stage(const Hamiltonian& h, const Eigen::VectorXcd& y0, double t0, double t1,
                         const PropagatorOptions& options, const std::vector<double>& sample_times,
                         std::vector<Sample>* samples) {
  if (t1 < t0) throw DomainError("evolution end time precedes start time");
  if (!(options.rtol > 0.0) || !(options.atol > 0.0)) throw DomainError("tolerances must be positive");
  if (y0.size() != h.dim()) throw DomainError("state and Hamiltonian dimensions differ");
  if (options.solver == Solver::frame_exponential && h.frame) return run_frame(h, y0, t0, t1, sample_times, samples);
  Dop853 stepper(h, options);
  return stepper.run(y0, t0, t1, sample_times, samples);
}

ComplexState evolve(const ComplexState& state, const Hamiltonian& h, double t0, double t1,
                    const PropagatorOptions& options) {
  if (!(state.basis == h.basis)) throw DomainError("state basis does not match Hamiltonian basis");
  StageRun r = integrate_stage(h, state.amplitudes, t0, t1, options, {}, nullptr);
  return ComplexState{state.basis, std::move(r.y)};
}

TrajectoryResult run_schedule(const ComplexState& initial, const std::vector<ScheduledStage>& stages,
                              const PropagatorOptions& options, double t_start) {
  if (options.samples_per_stage < 0) throw DomainError("samples_per_stage must be non-negative");
  TrajectoryResult result;
  result.final_state = initial;
  std::vector<Sample>* samples = options.samples_per_stage > 0 ? &result.samples : nullptr;
  if (samples != nullptr) samples->push_back({t_start, initial.amplitudes});
  result.start_time = t_start;
  double t = t_start;
  Eigen::VectorXcd y = initial.amplitudes;
  for (const auto& stage : stages) {
    if (!(stage.hamiltonian.basis == initial.basis)) {
      throw DomainError(fmt::format("stage '{}' uses a different basis", stage.label));
    }
    if (!(stage.duration >= 0.0)) throw DomainError(fmt::format("stage '{}' has a negative duration", stage.label));
    const double t_end = t + stage.duration;
    std::vector<double> times;
    if (samples != nullptr && stage.duration > 0.0) {
      const int m = options.samples_per_stage;
      times.reserve(static_cast<std::size_t>(m));
      for (int i = 1; i < m; ++i) times.push_back(t + stage.duration * i / m);
      times.push_back(t_end);
    }
    StageRun r = integrate_stage(stage.hamiltonian, y, t, t_end, options, times, samples);
    y = std::move(r.y);
    result.rydberg_time += r.rydberg_time;
    result.steps += r.steps;
    result.rejected_steps += r.rejected_steps;
    result.evaluations += r.evaluations;
    result.stage_end_states.push_back(ComplexState{initial.basis, y});
    result.stage_end_times.push_back(t_end);
    t = t_end;
  }
  result.final_state = ComplexState{initial.basis, y};
  return result;
}

TrajectoryResult run_sequence(const ComplexState& initial, const std::vector<DriveStage>& stages,
                              const WavevectorSet& wavevectors, Motion motion, const PropagatorOptions& options) {
  std::vector<ScheduledStage> schedule;
  schedule.reserve(stages.size());
  for (const auto& s : stages) {
    s.validate();
    schedule.push_back({to_string(s.kind), s.duration, h_gap_four_level(s, wavevectors, motion)});
  }
  return run_schedule(initial, schedule, options);
}

double principal_phase(cplx z) {
  const double p = std::arg(z);
  return p == -M_PI ? M_PI : p;
}

}  // namespace dualrail
