#pragma once

// Numerical checks of the multi-variable rate-distortion bounds:
//
//   sum_i R_{X_i|Parent(X_i)}(D_i) <= R(D_1..D_m) <= sum_i R_{X_i}(D_i)
//
// and of separability given side information: when the non-side variables
// split into blocks that are conditionally independent given Y, the joint
// conditional rate equals the sum of per-block conditional rates.

#include <span>
#include <vector>

#include "semrd/bayes_net.hpp"
#include "semrd/rd.hpp"

namespace semrd {

inline constexpr double kBoundTolerance = 2e-4;

struct TermResult {
  double rate = 0.0;
  bool converged = true;
};

struct BoundReport {
  double lower = 0.0;  // sum of conditional rates given parents
  double joint = 0.0;  // joint multi-distortion rate
  double upper = 0.0;  // sum of marginal rates
  double slack_lower = 0.0;  // joint - lower
  double slack_upper = 0.0;  // upper - joint
  double tolerance = kBoundTolerance;
  std::vector<TermResult> lower_terms;
  std::vector<TermResult> upper_terms;
  std::vector<double> joint_distortions;
  bool joint_converged = true;

  bool all_converged() const;
  bool ordered() const;
};

// Throws SizeGuardError when the joint solve does not fit under the guard.
BoundReport lemma1_bounds(const BayesNet& net, std::span<const double> targets,
                          const DistortionSpec& d, const RdOptions& opts = {},
                          double tolerance = kBoundTolerance);

struct DecompositionReport {
  Partition blocks;
  double joint_conditional = 0.0;
  double subset_sum = 0.0;
  std::vector<TermResult> block_rates;
  bool joint_converged = true;
  double tolerance = kBoundTolerance;

  double difference() const { return joint_conditional - subset_sum; }
  bool agrees() const;
  // Joint solve fell below the block sum by more than the tolerance.
  bool joint_below_subset_sum() const { return difference() < -tolerance; }
  bool all_converged() const;
};

// `targets` has one entry per network variable; entries of side variables
// are ignored.
DecompositionReport lemma2_check(const BayesNet& net, std::span<const int> side,
                                 std::span<const double> targets, const DistortionSpec& d,
                                 const RdOptions& opts = {}, double tolerance = kBoundTolerance);

// For each variable, `points` targets evenly spaced over (0, trivial
// distortion of its marginal]: grid[v][j] = trivial_v * (j + 1) / points.
std::vector<std::vector<double>> target_grid(const BayesNet& net, const DistortionSpec& d,
                                             int points = 9);

}  // namespace semrd
