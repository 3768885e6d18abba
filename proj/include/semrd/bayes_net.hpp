#pragma once

// Discrete Bayesian-network source model: variables, conditional probability
// tables, exact enumeration/marginalization, ancestral sampling and
// conditional-independence partitioning.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace semrd {

using StateVector = std::vector<int>;

inline constexpr std::uint64_t kDefaultSizeGuard = std::uint64_t{1} << 24;
inline constexpr std::uint64_t kMaxSizeGuard = std::uint64_t{1} << 28;

// Rows within this distance of 1 are renormalized by make_network.
inline constexpr double kRenormalizeTolerance = 1e-9;
// Rows farther than this from 1 are reported by validate.
inline constexpr double kRowSumTolerance = 1e-12;

struct Variable {
  int id = 0;
  std::string name;
  int cardinality = 2;
};

// Conditional probability table of `child` given `parents`.
//
// `table` holds one row of length card(child) per parent configuration.
// Parent configurations are enumerated in mixed-radix order with the
// last-listed parent varying fastest.
struct Cpt {
  int child = 0;
  std::vector<int> parents;
  std::vector<double> table;
};

struct BayesNet {
  std::vector<Variable> variables;
  std::vector<Cpt> cpts;   // cpts[i].child == i once built by make_network
  std::vector<int> order;  // topological order, parents before children

  int size() const { return static_cast<int>(variables.size()); }
  int cardinality(int id) const { return variables.at(id).cardinality; }
  const Cpt& cpt(int id) const;
  const std::vector<int>& parents(int id) const { return cpt(id).parents; }

  // Number of parent configurations (rows) of a variable's CPT.
  std::size_t parent_configurations(int id) const;
  // Row index selected by the parent states inside a full assignment.
  std::size_t parent_configuration(int id, std::span<const int> assignment) const;
  std::span<const double> row(int id, std::size_t config) const;

  // L: the maximum number of parents over all variables.
  int max_in_degree() const;
  // k: the maximum cardinality over all variables.
  int max_cardinality() const;
  // Product of all cardinalities, saturating at UINT64_MAX.
  std::uint64_t joint_states() const;
};

struct Violation {
  enum class Kind {
    kBadVariable,
    kMissingCpt,
    kDuplicateCpt,
    kUnknownParent,
    kCardinalityMismatch,
    kBadEntry,
    kRowSum,
    kCycle,
    kBadOrder,
  };
  Kind kind;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(Violation::Kind kind) const;
  std::string summary() const;
};

ValidationReport validate(const BayesNet& net);

// Topological order (Kahn, smallest ready id first). Empty when the parent
// relation is cyclic or refers to unknown variables.
std::vector<int> topological_order(const std::vector<Variable>& variables,
                                   const std::vector<Cpt>& cpts);

// Sorts CPTs by child, computes the order, renormalizes rows that are within
// kRenormalizeTolerance of summing to one, then validates. Throws
// ValidationError carrying the report summary when anything is wrong.
BayesNet make_network(std::vector<Variable> variables, std::vector<Cpt> cpts);

// Dense table over `scope`; mixed-radix index with the last scope variable
// varying fastest.
struct JointTable {
  std::vector<int> scope;
  std::vector<int> cards;
  std::vector<double> probs;

  std::size_t index(std::span<const int> states) const;
  StateVector states(std::size_t index) const;
  double total() const;
};

double joint_probability(const BayesNet& net, std::span<const int> assignment);

JointTable enumerate_joint(const BayesNet& net,
                           std::uint64_t limit = kDefaultSizeGuard);

// Exact marginal p(vars) by variable elimination over the ancestral set of
// `vars`; every intermediate factor is checked against `limit`.
JointTable marginal(const BayesNet& net, std::span<const int> vars,
                    std::uint64_t limit = kDefaultSizeGuard);

// Marginal of a table onto a subset of its scope, in the order given.
JointTable marginalize(const JointTable& table, std::span<const int> vars);

std::vector<StateVector> sample(const BayesNet& net, std::uint64_t seed,
                                std::size_t n);

struct Partition {
  std::vector<int> side_set;
  std::vector<std::vector<int>> blocks;
};

// Connected components of the moral graph after deleting `side_set`.
Partition conditional_partition(const BayesNet& net,
                                std::span<const int> side_set);

// Reads SEMRD_SIZE_GUARD when set (clamped to kMaxSizeGuard), otherwise
// kDefaultSizeGuard.
std::uint64_t size_guard_from_env();

}  // namespace semrd
