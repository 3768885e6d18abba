#pragma once

// Information measures in bits. 0 log 0 is taken as 0 throughout.

#include <span>
#include <vector>

#include "semrd/bayes_net.hpp"

namespace semrd {

// Cancellation noise below this magnitude is clamped to zero on output.
inline constexpr double kClampTolerance = 1e-9;

double binary_entropy(double p);
double entropy(std::span<const double> probs);

// H(X_i | Parent(X_i)) = sum_pa p(pa) H(X_i | pa).
double node_conditional_entropy(const BayesNet& net, int id);

// Sum over variables of H(X_i | Parent(X_i)); needs only per-node parent
// marginals, never the full joint table.
double joint_entropy_factorized(const BayesNet& net);

double joint_entropy_bruteforce(const JointTable& table);

// sum_i H(X_i) - H(X_1..X_m); raw value may be slightly negative.
double redundancy_gap_raw(const BayesNet& net, std::uint64_t limit = kDefaultSizeGuard);
double redundancy_gap(const BayesNet& net, std::uint64_t limit = kDefaultSizeGuard);

// I(X_i; Parent(X_i)); zero for root nodes.
double parent_mutual_information(const BayesNet& net, int id);

double conditional_mutual_information_raw(const JointTable& table, std::span<const int> a,
                                          std::span<const int> b, std::span<const int> c);
double conditional_mutual_information(const JointTable& table, std::span<const int> a,
                                      std::span<const int> b, std::span<const int> c);

}  // namespace semrd
