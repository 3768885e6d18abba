#include "semrd/bayes_net.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <sstream>

#include "semrd/errors.hpp"

namespace semrd {

namespace {

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
    return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

const Cpt* find_cpt(const std::vector<Cpt>& cpts, int id) {
  for (const auto& c : cpts)
    if (c.child == id) return &c;
  return nullptr;
}

// Factor over sorted variable ids, last id varying fastest.
struct Factor {
  std::vector<int> vars;
  std::vector<int> cards;
  std::vector<double> values;
};

std::uint64_t scope_size(const std::vector<int>& cards) {
  std::uint64_t n = 1;
  for (int c : cards) n = saturating_mul(n, static_cast<std::uint64_t>(c));
  return n;
}

// Strides of `f` laid out along `scope` (0 for variables f does not use).
std::vector<std::size_t> strides_in(const Factor& f, const std::vector<int>& scope) {
  std::vector<std::size_t> own(f.vars.size());
  std::size_t s = 1;
  for (std::size_t i = f.vars.size(); i-- > 0;) {
    own[i] = s;
    s *= static_cast<std::size_t>(f.cards[i]);
  }
  std::vector<std::size_t> out(scope.size(), 0);
  for (std::size_t i = 0; i < scope.size(); ++i) {
    auto it = std::find(f.vars.begin(), f.vars.end(), scope[i]);
    if (it != f.vars.end()) out[i] = own[static_cast<std::size_t>(it - f.vars.begin())];
  }
  return out;
}

Factor multiply(const Factor& a, const Factor& b, std::uint64_t limit) {
  Factor out;
  std::set_union(a.vars.begin(), a.vars.end(), b.vars.begin(), b.vars.end(),
                 std::back_inserter(out.vars));
  for (int v : out.vars) {
    auto ia = std::find(a.vars.begin(), a.vars.end(), v);
    out.cards.push_back(ia != a.vars.end()
                            ? a.cards[static_cast<std::size_t>(ia - a.vars.begin())]
                            : b.cards[static_cast<std::size_t>(
                                  std::find(b.vars.begin(), b.vars.end(), v) -
                                  b.vars.begin())]);
  }
  const std::uint64_t n = scope_size(out.cards);
  if (n > limit)
    throw SizeGuardError("intermediate factor of " + std::to_string(n) +
                         " entries exceeds size guard " + std::to_string(limit));
  out.values.assign(n, 0.0);
  const auto sa = strides_in(a, out.vars);
  const auto sb = strides_in(b, out.vars);
  std::vector<int> digit(out.vars.size(), 0);
  std::size_t ia = 0, ib = 0;
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a.values[ia] * b.values[ib];
    for (std::size_t d = out.vars.size(); d-- > 0;) {
      if (++digit[d] < out.cards[d]) {
        ia += sa[d];
        ib += sb[d];
        break;
      }
      digit[d] = 0;
      ia -= sa[d] * static_cast<std::size_t>(out.cards[d] - 1);
      ib -= sb[d] * static_cast<std::size_t>(out.cards[d] - 1);
    }
  }
  return out;
}

Factor sum_out(const Factor& f, int var) {
  Factor out;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < f.vars.size(); ++i) {
    if (f.vars[i] == var) {
      pos = i;
      continue;
    }
    out.vars.push_back(f.vars[i]);
    out.cards.push_back(f.cards[i]);
  }
  out.values.assign(scope_size(out.cards), 0.0);
  const auto so = strides_in(out, f.vars);
  std::vector<int> digit(f.vars.size(), 0);
  std::size_t io = 0;
  for (double v : f.values) {
    out.values[io] += v;
    for (std::size_t d = f.vars.size(); d-- > 0;) {
      if (++digit[d] < f.cards[d]) {
        io += so[d];
        break;
      }
      digit[d] = 0;
      io -= so[d] * static_cast<std::size_t>(f.cards[d] - 1);
    }
  }
  (void)pos;
  return out;
}

Factor cpt_factor(const BayesNet& net, int id) {
  const Cpt& c = net.cpt(id);
  // CPT layout is (parents in listed order..., child); permute to sorted ids.
  std::vector<int> layout = c.parents;
  layout.push_back(id);
  Factor src;
  src.vars = layout;
  for (int v : layout) src.cards.push_back(net.cardinality(v));
  src.values = c.table;

  Factor out;
  out.vars = layout;
  std::sort(out.vars.begin(), out.vars.end());
  for (int v : out.vars) out.cards.push_back(net.cardinality(v));
  out.values.assign(c.table.size(), 0.0);
  const auto so = strides_in(out, src.vars);
  std::vector<int> digit(src.vars.size(), 0);
  std::size_t io = 0;
  for (double v : src.values) {
    out.values[io] = v;
    for (std::size_t d = src.vars.size(); d-- > 0;) {
      if (++digit[d] < src.cards[d]) {
        io += so[d];
        break;
      }
      digit[d] = 0;
      io -= so[d] * static_cast<std::size_t>(src.cards[d] - 1);
    }
  }
  return out;
}

void check_id(const BayesNet& net, int id) {
  if (id < 0 || id >= net.size())
    throw InvalidArgument("unknown variable id " + std::to_string(id));
}

}  // namespace

const Cpt& BayesNet::cpt(int id) const {
  if (id >= 0 && static_cast<std::size_t>(id) < cpts.size() && cpts[id].child == id)
    return cpts[id];
  if (const Cpt* c = find_cpt(cpts, id)) return *c;
  throw InvalidArgument("no CPT for variable id " + std::to_string(id));
}

std::size_t BayesNet::parent_configurations(int id) const {
  std::size_t n = 1;
  for (int p : parents(id)) n *= static_cast<std::size_t>(cardinality(p));
  return n;
}

std::size_t BayesNet::parent_configuration(int id, std::span<const int> assignment) const {
  std::size_t config = 0;
  for (int p : parents(id))
    config = config * static_cast<std::size_t>(cardinality(p)) +
             static_cast<std::size_t>(assignment[static_cast<std::size_t>(p)]);
  return config;
}

std::span<const double> BayesNet::row(int id, std::size_t config) const {
  const Cpt& c = cpt(id);
  const auto k = static_cast<std::size_t>(cardinality(id));
  return std::span<const double>(c.table).subspan(config * k, k);
}

int BayesNet::max_in_degree() const {
  int l = 0;
  for (const auto& c : cpts) l = std::max(l, static_cast<int>(c.parents.size()));
  return l;
}

int BayesNet::max_cardinality() const {
  int k = 0;
  for (const auto& v : variables) k = std::max(k, v.cardinality);
  return k;
}

std::uint64_t BayesNet::joint_states() const {
  std::uint64_t n = 1;
  for (const auto& v : variables)
    n = saturating_mul(n, static_cast<std::uint64_t>(v.cardinality));
  return n;
}

bool ValidationReport::has(Violation::Kind kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [kind](const Violation& v) { return v.kind == kind; });
}

std::string ValidationReport::summary() const {
  std::string s;
  for (const auto& v : violations) {
    if (!s.empty()) s += "; ";
    s += v.message;
  }
  return s;
}

std::vector<int> topological_order(const std::vector<Variable>& variables,
                                   const std::vector<Cpt>& cpts) {
  const int m = static_cast<int>(variables.size());
  std::vector<int> indegree(m, 0);
  std::vector<std::vector<int>> children(m);
  for (const auto& c : cpts) {
    if (c.child < 0 || c.child >= m) return {};
    for (int p : c.parents) {
      if (p < 0 || p >= m) return {};
      children[p].push_back(c.child);
      ++indegree[c.child];
    }
  }
  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (int i = 0; i < m; ++i)
    if (indegree[i] == 0) ready.push(i);
  std::vector<int> order;
  while (!ready.empty()) {
    int v = ready.top();
    ready.pop();
    order.push_back(v);
    for (int c : children[v])
      if (--indegree[c] == 0) ready.push(c);
  }
  if (static_cast<int>(order.size()) != m) return {};
  return order;
}

ValidationReport validate(const BayesNet& net) {
  using K = Violation::Kind;
  ValidationReport report;
  auto add = [&](K kind, std::string msg) {
    report.violations.push_back({kind, std::move(msg)});
  };
  const int m = net.size();
  for (int i = 0; i < m; ++i) {
    const auto& v = net.variables[i];
    if (v.id != i)
      add(K::kBadVariable, "variable '" + v.name + "' has id " + std::to_string(v.id) +
                               ", expected dense id " + std::to_string(i));
    if (v.cardinality < 2)
      add(K::kBadVariable, "variable '" + v.name + "' has cardinality " +
                               std::to_string(v.cardinality) + " < 2");
  }

  std::vector<int> seen(m, 0);
  bool structure_ok = true;
  for (const auto& c : net.cpts) {
    if (c.child < 0 || c.child >= m) {
      add(K::kMissingCpt, "CPT for unknown child id " + std::to_string(c.child));
      structure_ok = false;
      continue;
    }
    if (++seen[c.child] == 2)
      add(K::kDuplicateCpt, "duplicate CPT for variable '" + net.variables[c.child].name + "'");
    std::size_t rows = 1;
    bool parents_ok = true;
    for (int p : c.parents) {
      if (p < 0 || p >= m || p == c.child) {
        add(K::kUnknownParent, "CPT of '" + net.variables[c.child].name +
                                   "' lists invalid parent id " + std::to_string(p));
        parents_ok = false;
        structure_ok = false;
        continue;
      }
      rows *= static_cast<std::size_t>(std::max(net.variables[p].cardinality, 1));
    }
    if (!parents_ok) continue;
    const auto k = static_cast<std::size_t>(std::max(net.variables[c.child].cardinality, 1));
    if (c.table.size() != rows * k) {
      add(K::kCardinalityMismatch,
          "CPT of '" + net.variables[c.child].name + "' has " + std::to_string(c.table.size()) +
              " entries, expected " + std::to_string(rows) + " rows x " + std::to_string(k));
      continue;
    }
    for (std::size_t r = 0; r < rows; ++r) {
      double sum = 0.0;
      bool entries_ok = true;
      for (std::size_t j = 0; j < k; ++j) {
        double p = c.table[r * k + j];
        if (!std::isfinite(p) || p < 0.0 || p > 1.0) entries_ok = false;
        sum += p;
      }
      if (!entries_ok)
        add(K::kBadEntry, "CPT of '" + net.variables[c.child].name + "' row " +
                              std::to_string(r) + " has an entry outside [0,1]");
      if (!(std::fabs(sum - 1.0) <= kRowSumTolerance)) {
        std::ostringstream os;
        os.precision(12);
        os << "CPT of '" << net.variables[c.child].name << "' row " << r << ": row sum "
           << sum << " != 1";
        add(K::kRowSum, os.str());
      }
    }
  }
  for (int i = 0; i < m; ++i)
    if (seen[i] == 0) add(K::kMissingCpt, "missing CPT for variable '" + net.variables[i].name + "'");

  if (structure_ok && topological_order(net.variables, net.cpts).empty())
    add(K::kCycle, "cycle in parent relation");

  // The stored order must be a permutation placing parents first.
  std::vector<int> position(m, -1);
  bool order_ok = static_cast<int>(net.order.size()) == m;
  for (std::size_t i = 0; order_ok && i < net.order.size(); ++i) {
    int v = net.order[i];
    if (v < 0 || v >= m || position[v] != -1)
      order_ok = false;
    else
      position[v] = static_cast<int>(i);
  }
  if (order_ok && structure_ok) {
    for (const auto& c : net.cpts) {
      if (c.child < 0 || c.child >= m) continue;
      for (int p : c.parents)
        if (position[p] > position[c.child]) order_ok = false;
    }
  }
  if (!order_ok) add(K::kBadOrder, "order is not a topological order of the variables");
  return report;
}

BayesNet make_network(std::vector<Variable> variables, std::vector<Cpt> cpts) {
  BayesNet net;
  net.variables = std::move(variables);
  std::sort(cpts.begin(), cpts.end(),
            [](const Cpt& a, const Cpt& b) { return a.child < b.child; });
  const int m = static_cast<int>(net.variables.size());
  for (auto& c : cpts) {
    if (c.child < 0 || c.child >= m) continue;
    const int k = net.variables[c.child].cardinality;
    if (k < 1 || c.table.size() % static_cast<std::size_t>(k) != 0) continue;
    for (std::size_t r = 0; r * k < c.table.size(); ++r) {
      double sum = 0.0;
      for (int j = 0; j < k; ++j) sum += c.table[r * k + j];
      if (sum != 1.0 && std::fabs(sum - 1.0) <= kRenormalizeTolerance)
        for (int j = 0; j < k; ++j) c.table[r * k + j] /= sum;
    }
  }
  net.cpts = std::move(cpts);
  net.order = topological_order(net.variables, net.cpts);
  auto report = validate(net);
  if (!report.ok()) throw ValidationError(report.summary());
  return net;
}

std::size_t JointTable::index(std::span<const int> states) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < cards.size(); ++i)
    idx = idx * static_cast<std::size_t>(cards[i]) + static_cast<std::size_t>(states[i]);
  return idx;
}

StateVector JointTable::states(std::size_t index) const {
  StateVector s(cards.size());
  for (std::size_t i = cards.size(); i-- > 0;) {
    s[i] = static_cast<int>(index % static_cast<std::size_t>(cards[i]));
    index /= static_cast<std::size_t>(cards[i]);
  }
  return s;
}

double JointTable::total() const {
  return std::accumulate(probs.begin(), probs.end(), 0.0);
}

double joint_probability(const BayesNet& net, std::span<const int> assignment) {
  if (static_cast<int>(assignment.size()) != net.size())
    throw InvalidState("assignment has " + std::to_string(assignment.size()) +
                       " states, network has " + std::to_string(net.size()) + " variables");
  for (int i = 0; i < net.size(); ++i)
    if (assignment[i] < 0 || assignment[i] >= net.cardinality(i))
      throw InvalidState("state " + std::to_string(assignment[i]) + " out of range for '" +
                         net.variables[i].name + "'");
  double p = 1.0;
  for (int i : net.order) {
    p *= net.row(i, net.parent_configuration(i, assignment))[assignment[i]];
    if (p == 0.0) break;
  }
  return p;
}

JointTable enumerate_joint(const BayesNet& net, std::uint64_t limit) {
  const std::uint64_t n = net.joint_states();
  if (n > limit)
    throw SizeGuardError("joint state space of " + std::to_string(n) +
                         " entries exceeds size guard " + std::to_string(limit));
  JointTable t;
  for (const auto& v : net.variables) {
    t.scope.push_back(v.id);
    t.cards.push_back(v.cardinality);
  }
  t.probs.assign(n, 0.0);
  StateVector s(static_cast<std::size_t>(net.size()), 0);
  for (std::size_t idx = 0; idx < n; ++idx) {
    t.probs[idx] = joint_probability(net, s);
    for (std::size_t d = s.size(); d-- > 0;) {
      if (++s[d] < t.cards[d]) break;
      s[d] = 0;
    }
  }
  return t;
}

JointTable marginal(const BayesNet& net, std::span<const int> vars, std::uint64_t limit) {
  std::vector<char> keep(static_cast<std::size_t>(net.size()), 0);
  for (int v : vars) {
    check_id(net, v);
    if (keep[v]) throw InvalidArgument("duplicate variable in marginal request");
    keep[v] = 1;
  }
  // Ancestral closure of the requested variables.
  std::vector<char> relevant = keep;
  for (auto it = net.order.rbegin(); it != net.order.rend(); ++it)
    if (relevant[*it])
      for (int p : net.parents(*it)) relevant[p] = 1;

  std::vector<Factor> factors;
  std::vector<int> to_eliminate;
  for (int i = 0; i < net.size(); ++i) {
    if (!relevant[i]) continue;
    factors.push_back(cpt_factor(net, i));
    if (!keep[i]) to_eliminate.push_back(i);
  }

  // Greedy elimination: pick the variable whose combined factor is smallest.
  while (!to_eliminate.empty()) {
    std::size_t best = 0;
    std::uint64_t best_size = std::numeric_limits<std::uint64_t>::max();
    for (std::size_t e = 0; e < to_eliminate.size(); ++e) {
      std::vector<int> scope;
      for (const auto& f : factors)
        if (std::binary_search(f.vars.begin(), f.vars.end(), to_eliminate[e]))
          scope.insert(scope.end(), f.vars.begin(), f.vars.end());
      std::sort(scope.begin(), scope.end());
      scope.erase(std::unique(scope.begin(), scope.end()), scope.end());
      std::uint64_t sz = 1;
      for (int v : scope) sz = saturating_mul(sz, static_cast<std::uint64_t>(net.cardinality(v)));
      if (sz < best_size) {
        best_size = sz;
        best = e;
      }
    }
    const int var = to_eliminate[best];
    to_eliminate.erase(to_eliminate.begin() + static_cast<std::ptrdiff_t>(best));
    Factor combined{{}, {}, {1.0}};
    std::vector<Factor> rest;
    for (auto& f : factors) {
      if (std::binary_search(f.vars.begin(), f.vars.end(), var))
        combined = multiply(combined, f, limit);
      else
        rest.push_back(std::move(f));
    }
    rest.push_back(sum_out(combined, var));
    factors = std::move(rest);
  }
  Factor result{{}, {}, {1.0}};
  for (const auto& f : factors) result = multiply(result, f, limit);

  // Reorder from sorted ids to the requested order.
  JointTable t;
  t.scope.assign(vars.begin(), vars.end());
  for (int v : t.scope) t.cards.push_back(net.cardinality(v));
  t.probs.assign(result.values.size(), 0.0);
  const auto st = strides_in(Factor{t.scope, t.cards, {}}, result.vars);
  std::vector<int> digit(result.vars.size(), 0);
  std::size_t it = 0;
  for (double v : result.values) {
    t.probs[it] = v;
    for (std::size_t d = result.vars.size(); d-- > 0;) {
      if (++digit[d] < result.cards[d]) {
        it += st[d];
        break;
      }
      digit[d] = 0;
      it -= st[d] * static_cast<std::size_t>(result.cards[d] - 1);
    }
  }
  return t;
}

JointTable marginalize(const JointTable& table, std::span<const int> vars) {
  std::vector<std::size_t> pos;
  for (int v : vars) {
    auto it = std::find(table.scope.begin(), table.scope.end(), v);
    if (it == table.scope.end())
      throw InvalidArgument("variable " + std::to_string(v) + " not in table scope");
    std::size_t p = static_cast<std::size_t>(it - table.scope.begin());
    if (std::find(pos.begin(), pos.end(), p) != pos.end())
      throw InvalidArgument("duplicate variable in marginalize request");
    pos.push_back(p);
  }
  JointTable out;
  out.scope.assign(vars.begin(), vars.end());
  for (std::size_t p : pos) out.cards.push_back(table.cards[p]);
  std::size_t n = 1;
  for (int c : out.cards) n *= static_cast<std::size_t>(c);
  out.probs.assign(n, 0.0);

  std::vector<std::size_t> stride(table.cards.size(), 0);
  std::size_t s = 1;
  for (std::size_t i = out.cards.size(); i-- > 0;) {
    stride[pos[i]] = s;
    s *= static_cast<std::size_t>(out.cards[i]);
  }
  std::vector<int> digit(table.cards.size(), 0);
  std::size_t io = 0;
  for (double p : table.probs) {
    out.probs[io] += p;
    for (std::size_t d = table.cards.size(); d-- > 0;) {
      if (++digit[d] < table.cards[d]) {
        io += stride[d];
        break;
      }
      digit[d] = 0;
      io -= stride[d] * static_cast<std::size_t>(table.cards[d] - 1);
    }
  }
  return out;
}

std::vector<StateVector> sample(const BayesNet& net, std::uint64_t seed, std::size_t n) {
  std::mt19937_64 rng(seed);
  std::vector<StateVector> out;
  out.reserve(n);
  for (std::size_t s = 0; s < n; ++s) {
    StateVector x(static_cast<std::size_t>(net.size()), 0);
    for (int i : net.order) {
      auto row = net.row(i, net.parent_configuration(i, x));
      // 53-bit uniform in [0,1), independent of the standard library's
      // distribution implementations.
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      double cum = 0.0;
      int chosen = -1;
      for (std::size_t j = 0; j < row.size(); ++j) {
        if (row[j] <= 0.0) continue;
        chosen = static_cast<int>(j);
        cum += row[j];
        if (u < cum) break;
      }
      x[i] = chosen;
    }
    out.push_back(std::move(x));
  }
  return out;
}

Partition conditional_partition(const BayesNet& net, std::span<const int> side_set) {
  const int m = net.size();
  std::vector<char> side(static_cast<std::size_t>(m), 0);
  for (int y : side_set) {
    check_id(net, y);
    side[y] = 1;
  }
  std::vector<int> parent(static_cast<std::size_t>(m));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  auto unite = [&](int a, int b) {
    if (side[a] || side[b]) return;
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  };
  // Moral graph: child-parent edges plus edges between co-parents.
  for (int i = 0; i < m; ++i) {
    const auto& ps = net.parents(i);
    for (std::size_t a = 0; a < ps.size(); ++a) {
      unite(i, ps[a]);
      for (std::size_t b = a + 1; b < ps.size(); ++b) unite(ps[a], ps[b]);
    }
  }
  Partition result;
  for (int y = 0; y < m; ++y)
    if (side[y]) result.side_set.push_back(y);
  std::vector<int> block_of(static_cast<std::size_t>(m), -1);
  for (int i = 0; i < m; ++i) {
    if (side[i]) continue;
    int root = find(i);
    if (block_of[root] < 0) {
      block_of[root] = static_cast<int>(result.blocks.size());
      result.blocks.emplace_back();
    }
    result.blocks[block_of[root]].push_back(i);
  }
  return result;
}

std::uint64_t size_guard_from_env() {
  const char* s = std::getenv("SEMRD_SIZE_GUARD");
  if (s == nullptr || *s == '\0') return kDefaultSizeGuard;
  char* end = nullptr;
  unsigned long long v = std::strtoull(s, &end, 10);
  if (end == s || *end != '\0' || v == 0)
    throw InvalidArgument(std::string("SEMRD_SIZE_GUARD is not a positive integer: ") + s);
  return std::min<std::uint64_t>(v, kMaxSizeGuard);
}

}  // namespace semrd
