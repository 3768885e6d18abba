#include "semrd/huffman.hpp"

#include <cmath>
#include <queue>
#include <tuple>

#include "semrd/errors.hpp"

namespace semrd {

bool BitReader::get() {
  if (pos_ >= capacity()) throw CorruptStream("payload truncated");
  const bool bit = (bytes_[pos_ >> 3] >> (7 - (pos_ & 7))) & 1u;
  ++pos_;
  return bit;
}

PrefixCode PrefixCode::build(std::span<const double> weights) {
  PrefixCode code;
  code.leaf_.assign(weights.size(), -1);
  code.lengths_.assign(weights.size(), -1);

  // (weight, smallest symbol, node index); std::greater gives a min-queue.
  using Entry = std::tuple<double, std::int32_t, std::int32_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  for (std::size_t s = 0; s < weights.size(); ++s) {
    if (!(weights[s] >= 0.0) || !std::isfinite(weights[s]))
      throw InvalidArgument("Huffman weights must be finite and nonnegative");
    if (weights[s] == 0.0) continue;
    const auto node = static_cast<std::int32_t>(code.nodes_.size());
    code.nodes_.push_back({-1, -1, -1, static_cast<std::int32_t>(s)});
    code.leaf_[s] = node;
    queue.emplace(weights[s], static_cast<std::int32_t>(s), node);
  }
  if (queue.empty()) throw InvalidArgument("Huffman code needs at least one positive weight");

  while (queue.size() > 1) {
    auto [w0, min0, left] = queue.top();
    queue.pop();
    auto [w1, min1, right] = queue.top();
    queue.pop();
    const auto node = static_cast<std::int32_t>(code.nodes_.size());
    code.nodes_.push_back({left, right, -1, -1});
    code.nodes_[left].parent = node;
    code.nodes_[right].parent = node;
    queue.emplace(w0 + w1, std::min(min0, min1), node);
  }
  code.root_ = std::get<2>(queue.top());

  for (std::size_t s = 0; s < weights.size(); ++s) {
    if (code.leaf_[s] < 0) continue;
    int depth = 0;
    for (auto n = code.leaf_[s]; code.nodes_[n].parent >= 0; n = code.nodes_[n].parent) ++depth;
    code.lengths_[s] = depth;
  }
  return code;
}

std::string PrefixCode::codeword(std::size_t symbol) const {
  std::string bits;
  if (leaf_[symbol] < 0) return bits;
  for (auto n = leaf_[symbol]; nodes_[n].parent >= 0; n = nodes_[n].parent)
    bits.insert(bits.begin(), nodes_[nodes_[n].parent].left == n ? '0' : '1');
  return bits;
}

void PrefixCode::write(std::size_t symbol, BitWriter& out) const {
  // Path bits collected leaf-to-root, emitted root-to-leaf.
  bool path[64];
  std::vector<bool> long_path;
  int len = 0;
  for (auto n = leaf_[symbol]; nodes_[n].parent >= 0; n = nodes_[n].parent) {
    const bool bit = nodes_[nodes_[n].parent].right == n;
    if (len < 64)
      path[len] = bit;
    else
      long_path.push_back(bit);
    ++len;
  }
  for (int i = len; i-- > 0;) out.put(i < 64 ? path[i] : long_path[static_cast<std::size_t>(i - 64)]);
}

std::size_t PrefixCode::read(BitReader& in) const {
  auto n = root_;
  while (nodes_[n].symbol < 0) n = in.get() ? nodes_[n].right : nodes_[n].left;
  return static_cast<std::size_t>(nodes_[n].symbol);
}

double PrefixCode::kraft_sum() const {
  double sum = 0.0;
  for (auto len : lengths_)
    if (len >= 0) sum += std::ldexp(1.0, -len);
  return sum;
}

double PrefixCode::expected_length(std::span<const double> probs) const {
  double total = 0.0;
  for (std::size_t s = 0; s < probs.size() && s < lengths_.size(); ++s)
    if (probs[s] > 0.0) total += probs[s] * lengths_[s];
  return total;
}

}  // namespace semrd
