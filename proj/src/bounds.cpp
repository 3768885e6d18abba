#include "semrd/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "semrd/errors.hpp"

namespace semrd {

namespace {

void check_inputs(const BayesNet& net, std::span<const double> targets, const DistortionSpec& d) {
  if (static_cast<int>(targets.size()) != net.size())
    throw InvalidArgument("need one distortion target per variable");
  if (static_cast<int>(d.per_variable.size()) != net.size())
    throw InvalidArgument("need one distortion matrix per variable");
}

TermResult solve_term(const RdSource& src, std::span<const Matrix> d,
                      std::span<const double> targets, const RdOptions& opts) {
  const RdPoint p = ba_joint_multi_target(src, d, targets, opts);
  return {p.rate, p.converged};
}

}  // namespace

bool BoundReport::all_converged() const {
  auto ok = [](const TermResult& t) { return t.converged; };
  return joint_converged && std::all_of(lower_terms.begin(), lower_terms.end(), ok) &&
         std::all_of(upper_terms.begin(), upper_terms.end(), ok);
}

bool BoundReport::ordered() const {
  return lower - tolerance <= joint && joint <= upper + tolerance;
}

bool DecompositionReport::agrees() const { return std::fabs(difference()) <= tolerance; }

bool DecompositionReport::all_converged() const {
  return joint_converged && std::all_of(block_rates.begin(), block_rates.end(),
                                        [](const TermResult& t) { return t.converged; });
}

BoundReport lemma1_bounds(const BayesNet& net, std::span<const double> targets,
                          const DistortionSpec& d, const RdOptions& opts, double tolerance) {
  check_inputs(net, targets, d);
  BoundReport report;
  report.tolerance = tolerance;
  const JointTable joint = enumerate_joint(net, opts.size_limit);

  for (int i = 0; i < net.size(); ++i) {
    const int self[1] = {i};
    const std::span<const Matrix> di(&d.per_variable[static_cast<std::size_t>(i)], 1);
    const std::span<const double> ti(&targets[static_cast<std::size_t>(i)], 1);

    const auto& parents = net.parents(i);
    const RdSource cond = RdSource::from_table(joint, self, parents);
    report.lower_terms.push_back(solve_term(cond, di, ti, opts));
    report.lower += report.lower_terms.back().rate;

    const RdSource marg = RdSource::from_table(joint, self, {});
    report.upper_terms.push_back(solve_term(marg, di, ti, opts));
    report.upper += report.upper_terms.back().rate;
  }

  std::vector<int> all(static_cast<std::size_t>(net.size()));
  for (int i = 0; i < net.size(); ++i) all[static_cast<std::size_t>(i)] = i;
  const RdPoint j = ba_joint_multi_target(RdSource::from_table(joint, all, {}), d.per_variable,
                                          targets, opts);
  report.joint = j.rate;
  report.joint_distortions = j.distortions;
  report.joint_converged = j.converged;
  report.slack_lower = report.joint - report.lower;
  report.slack_upper = report.upper - report.joint;
  return report;
}

DecompositionReport lemma2_check(const BayesNet& net, std::span<const int> side,
                                 std::span<const double> targets, const DistortionSpec& d,
                                 const RdOptions& opts, double tolerance) {
  check_inputs(net, targets, d);
  if (side.empty()) throw InvalidArgument("side-information set must be nonempty");
  DecompositionReport report;
  report.tolerance = tolerance;
  report.blocks = conditional_partition(net, side);
  if (report.blocks.blocks.empty())
    throw InvalidArgument("side-information set covers every variable");
  const JointTable joint = enumerate_joint(net, opts.size_limit);
  const auto& ys = report.blocks.side_set;

  auto solve_over = [&](const std::vector<int>& xs) {
    std::vector<Matrix> ds;
    std::vector<double> ts;
    for (int v : xs) {
      ds.push_back(d.per_variable[static_cast<std::size_t>(v)]);
      ts.push_back(targets[static_cast<std::size_t>(v)]);
    }
    return solve_term(RdSource::from_table(joint, xs, ys), ds, ts, opts);
  };

  std::vector<int> rest;
  for (const auto& b : report.blocks.blocks) rest.insert(rest.end(), b.begin(), b.end());
  std::sort(rest.begin(), rest.end());
  const TermResult whole = solve_over(rest);
  report.joint_conditional = whole.rate;
  report.joint_converged = whole.converged;

  for (const auto& b : report.blocks.blocks) {
    report.block_rates.push_back(solve_over(b));
    report.subset_sum += report.block_rates.back().rate;
  }
  return report;
}

std::vector<std::vector<double>> target_grid(const BayesNet& net, const DistortionSpec& d,
                                             int points) {
  if (points < 1) throw InvalidArgument("target grid needs at least one point");
  if (static_cast<int>(d.per_variable.size()) != net.size())
    throw InvalidArgument("need one distortion matrix per variable");
  std::vector<std::vector<double>> grid;
  for (int i = 0; i < net.size(); ++i) {
    const int self[1] = {i};
    const JointTable m = marginal(net, self);
    const double dmax =
        trivial_distortion(RdSource::unconditional(m.probs), 0, d.per_variable[static_cast<std::size_t>(i)]);
    std::vector<double> g;
    for (int j = 1; j <= points; ++j) g.push_back(dmax * j / points);
    grid.push_back(std::move(g));
  }
  return grid;
}

}  // namespace semrd
