#include "holodepth/cs/recover.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

#include "holodepth/common/error.hpp"
#include "holodepth/common/philox.hpp"

namespace holodepth::cs {
namespace {

double norm2(std::span<const double> v) { return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0)); }

double soft(double x, double t) {
  if (x > t) return x - t;
  if (x < -t) return x + t;
  return 0.0;
}

// The full objective for an iterate whose non-DC part has A-image `ax`.
// The DC coefficient is the exact minimiser given the rest.
struct DcSplit {
  const std::vector<double>* y;
  std::vector<double> a0;  // A e_0
  double a0_sq = 0.0;

  // Returns s0 and writes the residual y - ax - s0 a0 into `res`.
  double solve(const std::vector<double>& ax, double lambda, std::vector<double>& res) const {
    for (std::size_t m = 0; m < res.size(); ++m) res[m] = (*y)[m] - ax[m];
    if (a0_sq == 0.0) return 0.0;
    const double t = std::inner_product(a0.begin(), a0.end(), res.begin(), 0.0) / a0_sq;
    const double s0 = soft(t, lambda / a0_sq);
    for (std::size_t m = 0; m < res.size(); ++m) res[m] -= s0 * a0[m];
    return s0;
  }
};

// Largest pixel count for which the determined case is solved densely.
constexpr std::size_t kDirectSolveMaxPixels = 4096;

double l1_ac(const std::vector<double>& s) {
  double n = 0.0;
  for (std::size_t k = 1; k < s.size(); ++k) n += std::abs(s[k]);
  return n;
}

}  // namespace

bool RecoveryResult::operator==(const RecoveryResult& o) const {
  const auto bits = [](double v) { return std::bit_cast<std::uint64_t>(v); };
  return image == o.image && coefficients == o.coefficients && residual_norm == o.residual_norm &&
         iterations == o.iterations && stages == o.stages && converged == o.converged &&
         final_lambda == o.final_lambda && objective_trace.size() == o.objective_trace.size() &&
         std::equal(objective_trace.begin(), objective_trace.end(), o.objective_trace.begin(),
                    [&](double a, double b) { return bits(a) == bits(b); });
}

void SolverConfig::validate() const {
  if (lambda_init && !(*lambda_init > 0.0 && std::isfinite(*lambda_init)))
    throw InvalidArgument("solver: lambda_init must be positive");
  if (!(continuation_factor > 0.0 && continuation_factor < 1.0))
    throw InvalidArgument("solver: continuation_factor must be in (0, 1)");
  if (max_outer < 1 || max_inner < 1) throw InvalidArgument("solver: iteration limits must be >= 1");
  if (!(step_tolerance > 0.0)) throw InvalidArgument("solver: step_tolerance must be positive");
  if (!(residual_slack >= 1.0)) throw InvalidArgument("solver: residual_slack must be >= 1");
}

double residual_target(const Measurements& measurements, const SolverConfig& config) {
  if (measurements.epsilon > 0.0) return config.residual_slack * measurements.epsilon;
  return config.step_tolerance * norm2(measurements.values);
}

namespace {
void solve_lagrangian(const std::vector<double>& y, SensingOperator& op, const SolverConfig& config,
                      double target, RecoveryResult& result);
}  // namespace

RecoveryResult recover(const Measurements& measurements, const BinaryPatternEnsemble& ensemble,
                       const holo::OpticalGrid& grid, const SolverConfig& config) {
  config.validate();
  grid.validate();
  if (grid.pixel_count() != ensemble.n_pixels)
    throw InvalidArgument("recover: grid has " + std::to_string(grid.pixel_count()) + " pixels, patterns have " +
                          std::to_string(ensemble.n_pixels));
  if (measurements.values.size() != ensemble.n_measurements)
    throw InvalidArgument("recover: " + std::to_string(measurements.values.size()) + " measurements for " +
                          std::to_string(ensemble.n_measurements) + " patterns");
  if (!(measurements.epsilon >= 0.0)) throw InvalidArgument("recover: epsilon must be >= 0");
  for (double v : measurements.values)
    if (!std::isfinite(v)) throw InvalidArgument("recover: measurements must be finite");

  const std::size_t n = ensemble.n_pixels;
  const std::size_t m = ensemble.n_measurements;
  const std::vector<double>& y = measurements.values;
  SensingOperator op(ensemble, grid.height, grid.width);

  RecoveryResult result;
  result.coefficients.assign(n, 0.0);
  const double target = residual_target(measurements, config);
  const double y_norm = norm2(y);
  if (y_norm <= target) {
    result.image = holo::RealImage(grid);
    result.residual_norm = y_norm;
    result.converged = true;
    return result;
  }

  if (measurements.epsilon == 0.0 && m >= n && n <= kDirectSolveMaxPixels) {
    // The constraint set is the single point A^+ y.
    Eigen::MatrixXd a(m, n);
    std::vector<double> unit(n, 0.0), col(m);
    for (std::size_t k = 0; k < n; ++k) {
      unit[k] = 1.0;
      op.apply(unit, col);
      unit[k] = 0.0;
      for (std::size_t i = 0; i < m; ++i) a(i, k) = col[i];
    }
    const Eigen::Map<const Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(m));
    const Eigen::VectorXd s = a.colPivHouseholderQr().solve(yv);
    result.coefficients.assign(s.data(), s.data() + n);
    result.stages = 1;
  } else {
    solve_lagrangian(y, op, config, target, result);
  }
  result.image = holo::RealImage(grid);
  Dct2(grid.height, grid.width).inverse(result.coefficients, result.image.samples());
  // Recompute the residual from the stored coefficients so it is reproducible.
  std::vector<double> as(m);
  op.apply(result.coefficients, as);
  for (std::size_t i = 0; i < m; ++i) as[i] = y[i] - as[i];
  result.residual_norm = norm2(as);
  result.converged = result.residual_norm <= target;
  return result;
}

namespace {

void solve_lagrangian(const std::vector<double>& y, SensingOperator& op, const SolverConfig& config,
                      double target, RecoveryResult& result) {
  const std::size_t n = result.coefficients.size();
  const std::size_t m = y.size();
  const double y_norm = norm2(y);
  DcSplit dc{&y, std::vector<double>(m), 0.0};
  {
    // A e_0 = Phi * (1/sqrt(N)) * ones.
    const double c = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t i = 0; i < m; ++i) dc.a0[i] = op.popcounts()[i] * c;
    dc.a0_sq = std::inner_product(dc.a0.begin(), dc.a0.end(), dc.a0.begin(), 0.0);
  }

  // Lipschitz constant of the gradient restricted to the non-DC coefficients.
  double lipschitz = 0.0;
  {
    const CounterRng rng(config.power_iteration_seed, 0x706f776572);
    std::vector<double> v(n), av(m);
    for (std::size_t k = 0; k < n; ++k) v[k] = rng.normal(k);
    v[0] = 0.0;
    for (int it = 0; it < 20; ++it) {
      const double nv = norm2(v);
      if (nv == 0.0) break;
      for (double& x : v) x /= nv;
      op.apply(v, av);
      op.adjoint(av, v);
      v[0] = 0.0;
      lipschitz = norm2(v);
    }
    lipschitz = std::max(lipschitz * 1.05, std::numeric_limits<double>::min());
  }

  std::vector<double> grad(n);
  double lambda = config.lambda_init.value_or(0.0);
  if (!config.lambda_init) {
    std::vector<double> r0(m);
    dc.solve(std::vector<double>(m, 0.0), 0.0, r0);
    op.adjoint(r0, grad);
    double gmax = 0.0;
    for (std::size_t k = 1; k < n; ++k) gmax = std::max(gmax, std::abs(grad[k]));
    lambda = gmax > 0.0 ? 0.1 * gmax : 0.1 * dc.a0_sq;
  }
  // Objective changes below this are rounding noise.
  const double f_noise = 1e-12 * 0.5 * y_norm * y_norm;

  // x: accepted iterate (non-DC part, x[0] == 0); z: extrapolated point.
  std::vector<double> x(n, 0.0), z(n, 0.0), xn(n, 0.0);
  std::vector<double> ax(m, 0.0), az(m, 0.0), axn(m, 0.0), res(m), res_z(m);
  double s0 = 0.0;

  for (int stage = 0; stage < config.max_outer; ++stage) {
    ++result.stages;
    if (stage > 0) result.objective_trace.push_back(std::numeric_limits<double>::quiet_NaN());
    z = x;
    az = ax;
    double tk = 1.0;
    s0 = dc.solve(ax, lambda, res);
    double fx = lambda * (l1_ac(x) + std::abs(s0)) + 0.5 * std::inner_product(res.begin(), res.end(), res.begin(), 0.0);
    result.objective_trace.push_back(fx);
    bool just_restarted = true;

    for (int it = 0; it < config.max_inner; ++it) {
      ++result.iterations;
      dc.solve(az, lambda, res_z);
      op.adjoint(res_z, grad);  // -gradient
      const double step = 1.0 / lipschitz;
      xn[0] = 0.0;
      for (std::size_t k = 1; k < n; ++k) xn[k] = soft(z[k] + step * grad[k], lambda * step);
      op.apply(xn, axn);
      const double s0n = dc.solve(axn, lambda, res);
      const double fn =
          lambda * (l1_ac(xn) + std::abs(s0n)) + 0.5 * std::inner_product(res.begin(), res.end(), res.begin(), 0.0);

      if (fn > fx + f_noise) {
        // Momentum overshot: restart from x. If that was already a plain
        // proximal step the Lipschitz estimate was too small.
        if (just_restarted) lipschitz *= 2.0;
        z = x;
        az = ax;
        tk = 1.0;
        just_restarted = true;
        continue;
      }
      just_restarted = false;

      const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
      const double beta = (tk - 1.0) / tn;
      double diff_sq = 0.0, x_sq = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double d = xn[k] - x[k];
        diff_sq += d * d;
        x_sq += xn[k] * xn[k];
        z[k] = xn[k] + beta * d;
      }
      for (std::size_t i = 0; i < m; ++i) az[i] = axn[i] + beta * (axn[i] - ax[i]);
      std::swap(x, xn);
      std::swap(ax, axn);
      fx = fn;
      s0 = s0n;
      tk = tn;
      result.objective_trace.push_back(fx);
      if (std::sqrt(diff_sq) <= config.step_tolerance * std::max(1.0, std::sqrt(x_sq))) break;
    }

    s0 = dc.solve(ax, lambda, res);
    result.residual_norm = norm2(res);
    result.final_lambda = lambda;
    if (result.residual_norm <= target) {
      result.converged = true;
      break;
    }
    lambda *= config.continuation_factor;
  }

  result.coefficients = x;
  result.coefficients[0] = s0;
}

}  // namespace

}  // namespace holodepth::cs
