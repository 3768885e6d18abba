#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace semrd {

// Appends bits MSB-first into bytes; the final byte is zero-padded.
class BitWriter {
 public:
  void put(bool bit) {
    if (fill_ == 0) bytes_.push_back(0);
    if (bit) bytes_.back() |= static_cast<std::uint8_t>(0x80u >> fill_);
    fill_ = (fill_ + 1) & 7;
    ++bits_;
  }
  std::uint64_t bit_count() const { return bits_; }
  const std::vector<std::uint8_t>& bytes() const { return bytes_; }
  std::vector<std::uint8_t> take() { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
  int fill_ = 0;
  std::uint64_t bits_ = 0;
};

class BitReader {
 public:
  explicit BitReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}
  // Throws CorruptStream when the payload is exhausted.
  bool get();
  std::uint64_t position() const { return pos_; }
  std::uint64_t capacity() const { return static_cast<std::uint64_t>(bytes_.size()) * 8; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::uint64_t pos_ = 0;
};

// Huffman code built from the literal merge tree.
//
// Merge order is fixed: the queue is keyed by (weight, smallest contained
// symbol); the first node popped becomes the left child and receives bit 0.
// Zero-weight symbols get no codeword. A distribution with a single
// positive-weight symbol yields a zero-length codeword for it.
class PrefixCode {
 public:
  PrefixCode() = default;

  // Throws InvalidArgument when no weight is positive or any is negative.
  static PrefixCode build(std::span<const double> weights);

  std::size_t symbols() const { return leaf_.size(); }
  bool has_codeword(std::size_t symbol) const { return leaf_[symbol] >= 0; }
  // -1 for symbols without a codeword.
  int length(std::size_t symbol) const { return lengths_[symbol]; }
  // Codeword as a string of '0'/'1'.
  std::string codeword(std::size_t symbol) const;

  // Precondition: has_codeword(symbol).
  void write(std::size_t symbol, BitWriter& out) const;
  std::size_t read(BitReader& in) const;

  double kraft_sum() const;
  double expected_length(std::span<const double> probs) const;

 private:
  struct Node {
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::int32_t parent = -1;
    std::int32_t symbol = -1;
  };
  std::vector<Node> nodes_;
  std::vector<std::int32_t> leaf_;
  std::vector<std::int32_t> lengths_;
  std::int32_t root_ = -1;
};

}  // namespace semrd
