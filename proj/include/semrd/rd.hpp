#pragma once

// Rate-distortion solvers.
//
// All solvers are Blahut-Arimoto iterations parametrized by slopes s <= 0 in
// bits per unit distortion: for a fixed reconstruction marginal q the test
// channel is Q(xh|x) ~ q(xh) * 2^(sum_i s_i d_i(x_i, xh_i)). With side
// information Y (known to encoder and decoder) one such iteration runs per
// value of y at common slopes and the results are averaged under p(y).
//
// Target-distortion entry points invert the slope parametrization by
// per-coordinate root finding on the slope.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "semrd/bayes_net.hpp"

namespace semrd {

// Dense row-major matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

enum class DistortionKind { kHamming, kSquaredError };

// d(x, xh) = [x != xh].
Matrix hamming_distortion(int k);
// d(x, xh) = (x - xh)^2 on state labels.
Matrix squared_error_distortion(int k);
Matrix make_distortion(DistortionKind kind, int k);
// Accepts "hamming" and "squared"; throws InvalidArgument otherwise.
DistortionKind parse_distortion_kind(std::string_view name);
// Entries finite and nonnegative.
bool valid_distortion(const Matrix& d);

// One distortion matrix per network variable.
struct DistortionSpec {
  std::vector<Matrix> per_variable;

  static DistortionSpec preset(DistortionKind kind, const BayesNet& net);
};

struct RdOptions {
  double gap_tol_nats = 1e-9;   // Blahut upper/lower bound gap
  int max_iters = 10000;        // per slope point
  double target_tol = 1e-6;     // |E d - D| for target solves
  double min_slope = -100.0;    // steeper slopes are clamped
  int max_sweeps = 60;          // coordinate sweeps in multi-target solves
  std::uint64_t size_limit = kDefaultSizeGuard;  // |X| * |Xh| per side value
};

struct RdPoint {
  double rate = 0.0;                // bits
  std::vector<double> distortions;  // E d_i
  std::vector<double> slopes;       // s_i used (0 for trivial coordinates)
  int iterations = 0;               // summed over inner BA runs
  bool converged = true;
};

struct RdCurve {
  std::vector<RdPoint> points;
  std::vector<std::string> errors;  // per point; empty string when solved
  bool monotone = true;
  bool convex = true;
};

// Joint law p(y, x_1..x_m): index = y * prod(cards) + mixed-radix(x), last
// coordinate fastest. side_states == 1 means no side information.
struct RdSource {
  std::vector<int> cards;
  int side_states = 1;
  std::vector<double> probs;

  std::size_t source_states() const;

  static RdSource unconditional(std::span<const double> p);
  // joint_yx(y, x) = p(x, y).
  static RdSource conditional(const Matrix& joint_yx);
  // Coordinates `xs` with the side variables `side` flattened into one index.
  static RdSource from_table(const JointTable& table, std::span<const int> xs,
                             std::span<const int> side);
};

// Minimum over reconstructions that depend only on y of E d(X_coord, Xh).
double trivial_distortion(const RdSource& src, int coord, const Matrix& d);

RdPoint ba_point(std::span<const double> source, const Matrix& d, double slope,
                 const RdOptions& opts = {});
RdPoint ba_target(std::span<const double> source, const Matrix& d, double target,
                  const RdOptions& opts = {});

// joint_yx(y, x) = p(x, y).
RdPoint ba_conditional(const Matrix& joint_yx, const Matrix& d, double slope,
                       const RdOptions& opts = {});
RdPoint ba_conditional_target(const Matrix& joint_yx, const Matrix& d, double target,
                              const RdOptions& opts = {});

RdPoint ba_joint_multi(const RdSource& src, std::span<const Matrix> d,
                       std::span<const double> slopes, const RdOptions& opts = {});
RdPoint ba_joint_multi_target(const RdSource& src, std::span<const Matrix> d,
                              std::span<const double> targets, const RdOptions& opts = {});

// Sweep of a common slope applied to every coordinate, warm-started from the
// previous point. Flags refer to total distortion sum_i E d_i.
RdCurve rd_curve(const RdSource& src, std::span<const Matrix> d, std::span<const double> slopes,
                 const RdOptions& opts = {});
// One target solve per entry of `targets`; every coordinate gets that target.
RdCurve rd_curve_targets(const RdSource& src, std::span<const Matrix> d,
                         std::span<const double> targets, const RdOptions& opts = {});

// [h_b(p) - h_b(D)] for 0 <= D <= p, else 0. Requires 0 <= p <= 0.5.
double binary_conditional_rd(double p, double distortion);
// [1/2 log2(sigma^2 (1 - r^2) / D)] for 0 < D <= sigma^2 (1 - r^2), else 0.
double gaussian_conditional_rd(double sigma, double r, double distortion);

}  // namespace semrd
