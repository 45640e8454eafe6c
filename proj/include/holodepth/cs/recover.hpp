#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "holodepth/cs/patterns.hpp"
#include "holodepth/cs/sensing.hpp"
#include "holodepth/holo/grid.hpp"

namespace holodepth::cs {

struct SolverConfig {
  /// Starting lambda; unset means 0.1 * max_k |A_k^T r0| over the non-DC
  /// columns, r0 being the residual after fitting the DC term alone.
  std::optional<double> lambda_init;
  double continuation_factor = 0.5;
  int max_outer = 40;
  int max_inner = 300;
  double step_tolerance = 1e-6;
  double residual_slack = 1.05;
  std::uint64_t power_iteration_seed = 0x5eed;

  /// Throws InvalidArgument on out-of-range fields.
  void validate() const;
};

struct RecoveryResult {
  holo::RealImage image;             ///< x = dct2_inverse(coefficients)
  std::vector<double> coefficients;  ///< DCT coefficients s
  double residual_norm = 0.0;        ///< ||y - A s||_2
  int iterations = 0;                ///< inner iterations over all stages
  int stages = 0;                    ///< continuation stages run
  bool converged = false;
  double final_lambda = 0.0;
  /// Objective lambda*||s||_1 + 0.5*||y - A s||^2 of every accepted iterate,
  /// with a NaN separating continuation stages. Within a stage it never rises
  /// by more than 1e-12 * 0.5 * ||y||^2.
  std::vector<double> objective_trace;

  /// Field-wise equality; trace entries compare bitwise so NaN separators match.
  bool operator==(const RecoveryResult& other) const;
};

/// Residual target: residual_slack * epsilon, or step_tolerance * ||y|| when
/// epsilon is zero.
double residual_target(const Measurements& measurements, const SolverConfig& config);

/// Solves min ||s||_1 s.t. ||y - A s||_2 <= epsilon through a sequence of
/// Lagrangian problems min lambda ||s||_1 + 0.5 ||y - A s||^2 with lambda
/// shrinking geometrically. Each is solved by FISTA with function-value
/// restart. The DC coefficient is updated in closed form every iteration
/// because {0,1} patterns give it a much larger column norm than the rest.
///
/// With epsilon == 0 and at least as many measurements as pixels (up to 4096
/// pixels) the constraint alone fixes s, which is then found by a dense
/// pivoted QR solve instead.
///
/// Non-convergence is reported through `converged`, not thrown.
RecoveryResult recover(const Measurements& measurements, const BinaryPatternEnsemble& ensemble,
                       const holo::OpticalGrid& grid, const SolverConfig& config);

}  // namespace holodepth::cs
