#include "semrd/info.hpp"

#include <algorithm>
#include <cmath>

#include "semrd/errors.hpp"

namespace semrd {

namespace {

double clamp_small_negative(double raw) { return raw < 0.0 && raw >= -kClampTolerance ? 0.0 : raw; }

std::vector<int> concat(std::span<const int> x, std::span<const int> y) {
  std::vector<int> out(x.begin(), x.end());
  out.insert(out.end(), y.begin(), y.end());
  return out;
}

double marginal_entropy(const JointTable& table, std::span<const int> vars) {
  if (vars.empty()) return 0.0;
  return entropy(marginalize(table, vars).probs);
}

}  // namespace

double binary_entropy(double p) {
  const double q[2] = {p, 1.0 - p};
  return entropy(q);
}

double entropy(std::span<const double> probs) {
  double h = 0.0;
  for (double p : probs)
    if (p > 0.0) h -= p * std::log2(p);
  return h;
}

double node_conditional_entropy(const BayesNet& net, int id) {
  if (id < 0 || id >= net.size())
    throw InvalidArgument("unknown variable id " + std::to_string(id));
  const auto& parents = net.parents(id);
  const JointTable pa = marginal(net, parents);
  double h = 0.0;
  for (std::size_t r = 0; r < pa.probs.size(); ++r)
    if (pa.probs[r] > 0.0) h += pa.probs[r] * entropy(net.row(id, r));
  return h;
}

double joint_entropy_factorized(const BayesNet& net) {
  double h = 0.0;
  for (int i = 0; i < net.size(); ++i) h += node_conditional_entropy(net, i);
  return h;
}

double joint_entropy_bruteforce(const JointTable& table) { return entropy(table.probs); }

double parent_mutual_information(const BayesNet& net, int id) {
  if (net.parents(id).empty()) return 0.0;
  const int self[1] = {id};
  return entropy(marginal(net, self).probs) - node_conditional_entropy(net, id);
}

double redundancy_gap_raw(const BayesNet& net, std::uint64_t limit) {
  const JointTable joint = enumerate_joint(net, limit);
  double sum = 0.0;
  for (int i = 0; i < net.size(); ++i) {
    const int v[1] = {i};
    sum += entropy(marginalize(joint, v).probs);
  }
  return sum - joint_entropy_bruteforce(joint);
}

double redundancy_gap(const BayesNet& net, std::uint64_t limit) {
  return clamp_small_negative(redundancy_gap_raw(net, limit));
}

double conditional_mutual_information_raw(const JointTable& table, std::span<const int> a,
                                          std::span<const int> b, std::span<const int> c) {
  std::vector<int> all = concat(concat(a, b), c);
  std::vector<int> sorted = all;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw InvalidArgument("conditional mutual information needs disjoint variable sets");
  for (int v : all)
    if (std::find(table.scope.begin(), table.scope.end(), v) == table.scope.end())
      throw InvalidArgument("variable " + std::to_string(v) + " not in table scope");
  // I(A;B|C) = H(A,C) + H(B,C) - H(A,B,C) - H(C)
  return marginal_entropy(table, concat(a, c)) + marginal_entropy(table, concat(b, c)) -
         marginal_entropy(table, all) - marginal_entropy(table, c);
}

double conditional_mutual_information(const JointTable& table, std::span<const int> a,
                                      std::span<const int> b, std::span<const int> c) {
  return clamp_small_negative(conditional_mutual_information_raw(table, a, b, c));
}

}  // namespace semrd
