#include <doctest.h>

#include <Eigen/Dense>

#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "dualrail/kernels.hpp"

using namespace dualrail::kernels;

namespace {

std::vector<cplx> random_vector(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  std::vector<cplx> v(static_cast<std::size_t>(n));
  for (auto& x : v) x = {g(rng), g(rng)};
  return v;
}

double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

std::vector<const KernelSet*> all_kernels() {
  std::vector<const KernelSet*> out{&scalar_kernels()};
  if (const auto* simd = avx2_kernels()) out.push_back(simd);
  return out;
}

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("mat-vec matches Eigen for every kernel set and size") {
    std::mt19937_64 rng(42);
    for (const auto* ks : all_kernels()) {
      CAPTURE(std::string(ks->name));
      for (int n = 1; n <= 13; ++n) {
        const auto h = random_vector(rng, n * n);
        const auto x = random_vector(rng, n);
        std::vector<cplx> y(static_cast<std::size_t>(n));
        ks->apply_minus_i(h.data(), n, x.data(), y.data());
        const Eigen::Map<const Eigen::MatrixXcd> hm(h.data(), n, n);
        const Eigen::Map<const Eigen::VectorXcd> xm(x.data(), n);
        const Eigen::VectorXcd ref = cplx(0, -1) * (hm * xm);
        for (int i = 0; i < n; ++i) CHECK(std::abs(y[i] - ref(i)) < 1e-12 * (1.0 + std::abs(ref(i))));
      }
    }
  }

  TEST_CASE("SIMD kernels reproduce the scalar reference") {
    const auto* simd = avx2_kernels();
    if (simd == nullptr) {
      MESSAGE("AVX2 kernels unavailable on this machine; equivalence not exercised");
      return;
    }
    const auto& ref = scalar_kernels();
    std::mt19937_64 rng(9);
    for (int n : {1, 2, 3, 4, 5, 9, 12, 16}) {
      for (int trial = 0; trial < 20; ++trial) {
        const auto h = random_vector(rng, n * n);
        const auto x = random_vector(rng, n);
        std::vector<cplx> ya(static_cast<std::size_t>(n)), yb(static_cast<std::size_t>(n));
        ref.apply_minus_i(h.data(), n, x.data(), ya.data());
        simd->apply_minus_i(h.data(), n, x.data(), yb.data());
        CHECK(max_abs_diff(ya, yb) < 1e-13 * n);

        const int terms = 1 + trial % 12;
        std::vector<std::vector<cplx>> ks;
        std::vector<const cplx*> ptrs;
        std::vector<double> coeffs;
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        for (int j = 0; j < terms; ++j) {
          ks.push_back(random_vector(rng, n));
          coeffs.push_back(u(rng));
        }
        for (const auto& k : ks) ptrs.push_back(k.data());
        std::vector<cplx> oa(static_cast<std::size_t>(n)), ob(static_cast<std::size_t>(n));
        ref.combine(n, x.data(), 0.037, terms, coeffs.data(), ptrs.data(), oa.data());
        simd->combine(n, x.data(), 0.037, terms, coeffs.data(), ptrs.data(), ob.data());
        CHECK(max_abs_diff(oa, ob) < 1e-14 * terms);
      }
    }
  }

  TEST_CASE("combine matches the plain sum") {
    std::mt19937_64 rng(1);
    const int n = 7;
    const auto y0 = random_vector(rng, n);
    const auto k1 = random_vector(rng, n);
    const auto k2 = random_vector(rng, n);
    const cplx* ks[] = {k1.data(), k2.data()};
    const double c[] = {0.25, -1.5};
    for (const auto* set : all_kernels()) {
      std::vector<cplx> out(n);
      set->combine(n, y0.data(), 0.1, 2, c, ks, out.data());
      for (int i = 0; i < n; ++i) {
        CHECK(std::abs(out[i] - (y0[i] + 0.1 * (0.25 * k1[i] - 1.5 * k2[i]))) < 1e-15);
      }
    }
  }

  TEST_CASE("active kernel selection honours the override") {
    const std::string name = active_kernels().name;
    const char* env = std::getenv("DUALRAIL_KERNELS");
    if (env != nullptr && std::string(env) == "scalar") {
      CHECK(name == scalar_kernels().name);
    } else if (avx2_kernels() != nullptr) {
      CHECK(name == avx2_kernels()->name);
    } else {
      CHECK(name == scalar_kernels().name);
    }
  }
}
