#include <doctest.h>

#include <cmath>
#include <numbers>

#include "holodepth/common/error.hpp"
#include "holodepth/common/philox.hpp"
#include "holodepth/cs/sensing.hpp"

using namespace holodepth;

namespace {

// Dense Phi, Psi and A = Phi * Psi built element by element.
struct Dense {
  int n, m;
  std::vector<double> phi, psi, a;  // row-major
};

double basis(int k, int i, int n) {
  const double s = k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
  return s * std::cos(std::numbers::pi * (i + 0.5) * k / n);
}

Dense dense(const cs::BinaryPatternEnsemble& e, int rows, int cols) {
  Dense d{rows * cols, static_cast<int>(e.n_measurements), {}, {}, {}};
  d.phi.resize(d.m * d.n);
  for (int m = 0; m < d.m; ++m)
    for (int i = 0; i < d.n; ++i) d.phi[m * d.n + i] = e.bit(m, i);
  // Column k of Psi is the image of basis function k.
  d.psi.resize(d.n * d.n);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      for (int kr = 0; kr < rows; ++kr)
        for (int kc = 0; kc < cols; ++kc)
          d.psi[(r * cols + c) * d.n + kr * cols + kc] = basis(kr, r, rows) * basis(kc, c, cols);
  d.a.assign(d.m * d.n, 0.0);
  for (int m = 0; m < d.m; ++m)
    for (int k = 0; k < d.n; ++k)
      for (int i = 0; i < d.n; ++i) d.a[m * d.n + k] += d.phi[m * d.n + i] * d.psi[i * d.n + k];
  return d;
}

std::vector<double> matvec(const std::vector<double>& mat, int rows, int cols, const std::vector<double>& v,
                           bool transpose) {
  std::vector<double> out(transpose ? cols : rows, 0.0);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (transpose) out[c] += mat[r * cols + c] * v[r];
      else out[r] += mat[r * cols + c] * v[c];
    }
  return out;
}

std::vector<double> randn(std::size_t n, std::uint64_t seed) {
  const CounterRng rng(seed, 3);
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k) v[k] = rng.normal(k);
  return v;
}

void check_close(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(std::abs(a[k] - b[k]) <= tol);
}

}  // namespace

TEST_CASE("operator products equal dense matrix products") {
  for (auto [rows, cols, rate] : {std::tuple{8, 8, 0.5}, {4, 4, 0.5}, {3, 7, 0.9}, {1, 13, 1.0}, {8, 8, 0.2}}) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const auto e = cs::generate_patterns(rows * cols, rate, seed);
      const Dense d = dense(e, rows, cols);
      cs::SensingOperator op(e, rows, cols);
      const auto x = randn(d.n, seed);
      const auto v = randn(d.m, seed + 10);
      std::vector<double> y(d.m), xt(d.n), as(d.m), atv(d.n);
      op.phi(x, y);
      op.phi_transpose(v, xt);
      op.apply(x, as);
      op.adjoint(v, atv);
      check_close(y, matvec(d.phi, d.m, d.n, x, false), 1e-12);
      check_close(xt, matvec(d.phi, d.m, d.n, v, true), 1e-12);
      check_close(as, matvec(d.a, d.m, d.n, x, false), 1e-12);
      check_close(atv, matvec(d.a, d.m, d.n, v, true), 1e-12);
      check_close(cs::apply_sensing(x, e, rows, cols), as, 0.0);
      check_close(cs::apply_sensing_adjoint(v, e, rows, cols), atv, 0.0);
    }
  }
}

TEST_CASE("adjoint identity on a large operator") {
  const int rows = 54, cols = 96;
  const auto e = cs::generate_patterns(rows * cols, 0.25, 9);
  cs::SensingOperator op(e, rows, cols);
  const auto s = randn(op.n_pixels(), 1);
  const auto v = randn(op.n_measurements(), 2);
  std::vector<double> as(op.n_measurements()), atv(op.n_pixels());
  op.apply(s, as);
  op.adjoint(v, atv);
  double lhs = 0, rhs = 0, scale = 0;
  for (std::size_t i = 0; i < as.size(); ++i) lhs += as[i] * v[i];
  for (std::size_t k = 0; k < s.size(); ++k) rhs += s[k] * atv[k];
  for (std::size_t i = 0; i < as.size(); ++i) scale += std::abs(as[i] * v[i]);
  CHECK(std::abs(lhs - rhs) <= 1e-12 * scale);
}

TEST_CASE("noiseless measurement equals Phi x; noise is seeded") {
  const holo::OpticalGrid grid{6, 5, 1e-5, 5e-7};
  holo::RealImage img(grid);
  const auto x = randn(img.size(), 4);
  img.data() = x;
  const auto e = cs::generate_patterns(img.size(), 0.6, 2);
  const auto clean = cs::measure(img, e, 0.0, 1);
  CHECK(clean.epsilon == 0.0);
  CHECK(clean.sampling_rate == doctest::Approx(0.6).epsilon(0.02));
  check_close(clean.values, matvec(dense(e, 5, 6).phi, e.n_measurements, 30, x, false), 1e-12);
  const auto noisy = cs::measure(img, e, 0.1, 1);
  CHECK(noisy.values == cs::measure(img, e, 0.1, 1).values);
  CHECK_FALSE(noisy.values == cs::measure(img, e, 0.1, 2).values);
  CHECK(noisy.epsilon == doctest::Approx(cs::noise_bound(0.1, e.n_measurements)));
  const double m = static_cast<double>(e.n_measurements);
  CHECK(cs::noise_bound(0.1, e.n_measurements) == doctest::Approx(0.1 * std::sqrt(m + 2 * std::sqrt(2 * m))));
}

TEST_CASE("noise bound holds for most draws") {
  const holo::OpticalGrid grid{16, 16, 1e-5, 5e-7};
  const holo::RealImage img(grid, 1.0);
  const auto e = cs::generate_patterns(img.size(), 0.5, 3);
  const auto clean = cs::measure(img, e, 0.0, 0);
  int within = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto noisy = cs::measure(img, e, 0.5, seed);
    double r = 0;
    for (std::size_t i = 0; i < clean.values.size(); ++i)
      r += (noisy.values[i] - clean.values[i]) * (noisy.values[i] - clean.values[i]);
    within += std::sqrt(r) <= noisy.epsilon;
  }
  CHECK(within >= 45);
}

TEST_CASE("measurement CSV round-trips and reports bad rows") {
  cs::Measurements m;
  m.values = {1.5, -2.25, 1e-300, 3.0};
  CHECK(cs::parse_measurements_csv(cs::format_measurements_csv(m)) == m.values);
  CHECK_THROWS_AS(cs::parse_measurements_csv("index,value\n0,1\n1,abc\n"), ParseError);
  CHECK_THROWS_AS(cs::parse_measurements_csv("index,value\n0,1\n2,1\n"), ParseError);
  CHECK_THROWS_AS(cs::parse_measurements_csv("wrong\n"), ParseError);
}
