#pragma once

// Lossless coding of network sources.
//
// A FactorizedCodebook holds one Huffman code per variable and per parent
// configuration of positive probability. Samples are coded variable by
// variable in topological order, each with the code selected by its
// already-coded parents, so no table ever spans the joint alphabet.
//
// Stream layout (all multi-byte integers big-endian):
//   offset  0  4 bytes  magic "SMRD"
//   offset  4  1 byte   format version (1)
//   offset  5  8 bytes  number of state vectors n
//   offset 13 16 bytes  network digest (first 16 bytes of SHA-256 of the
//                       canonical network serialization)
//   offset 29           payload, MSB-first, zero-padded to a byte boundary

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "semrd/bayes_net.hpp"
#include "semrd/huffman.hpp"

namespace semrd {

using NetDigest = std::array<std::uint8_t, 16>;

inline constexpr std::array<std::uint8_t, 4> kStreamMagic = {'S', 'M', 'R', 'D'};
inline constexpr std::uint8_t kStreamVersion = 1;
inline constexpr std::size_t kStreamHeaderSize = 4 + 1 + 8 + 16;

NetDigest net_digest(const BayesNet& net);
std::string to_hex(const NetDigest& digest);

struct FactorizedCodebook {
  BayesNet net;
  NetDigest digest{};
  // codes[i][config]; empty for zero-probability parent configurations.
  std::vector<std::vector<std::optional<PrefixCode>>> codes;
  // Number of conditional distributions coded and CPT entries read.
  std::size_t distributions_built = 0;
  std::size_t entries_touched = 0;

  const PrefixCode* code(int id, std::size_t config) const;
};

struct Bitstream {
  std::uint8_t version = kStreamVersion;
  std::uint64_t count = 0;
  NetDigest digest{};
  std::vector<std::uint8_t> payload;
  std::uint64_t payload_bits = 0;  // informational; not serialized
};

std::vector<std::uint8_t> serialize(const Bitstream& stream);
// Throws CorruptStream on a short header, bad magic or unknown version.
Bitstream parse_bitstream(std::span<const std::uint8_t> bytes);

PrefixCode build_joint_huffman(const JointTable& table, std::uint64_t limit = kDefaultSizeGuard);

FactorizedCodebook build_factorized_codebooks(const BayesNet& net);

// Throws InvalidState for malformed vectors, UncodableSample for vectors of
// zero probability under the network.
Bitstream encode(const FactorizedCodebook& fcb, std::span<const StateVector> samples);

// Throws WrongCodebook on digest mismatch, CorruptStream on truncated or
// over-long payloads.
std::vector<StateVector> decode(const FactorizedCodebook& fcb, const Bitstream& stream);

// Exact expected codeword bits per state vector.
double expected_length(const FactorizedCodebook& fcb);
double expected_length(const PrefixCode& code, const JointTable& table);

struct ComplexityReport {
  int variables = 0;          // m
  int max_cardinality = 0;    // k
  int max_in_degree = 0;      // L
  double joint_alphabet = 0;  // k^m as the product of actual cardinalities
  double factorized_distribution_bound = 0;  // m * k^L
  double factorized_entry_bound = 0;         // m * k^L * k
  std::size_t factorized_distributions = 0;
  std::size_t factorized_entries = 0;
  double factorized_build_ms = 0;
  std::optional<double> joint_build_ms;
  std::string joint_note;
};

ComplexityReport complexity_report(const BayesNet& net, std::uint64_t limit = kDefaultSizeGuard);

}  // namespace semrd
