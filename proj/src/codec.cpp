#include "semrd/codec.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>

#include "semrd/errors.hpp"
#include "semrd/network_io.hpp"

namespace semrd {

namespace {

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

std::uint64_t get_u64(std::span<const std::uint8_t> in) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | in[static_cast<std::size_t>(i)];
  return v;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

NetDigest net_digest(const BayesNet& net) {
  const std::string canon = canonical_serialization(net);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(canon.data(), canon.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  NetDigest d{};
  std::copy_n(md, d.size(), d.begin());
  return d;
}

std::string to_hex(const NetDigest& digest) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string s;
  for (auto b : digest) {
    s.push_back(kHex[b >> 4]);
    s.push_back(kHex[b & 15]);
  }
  return s;
}

const PrefixCode* FactorizedCodebook::code(int id, std::size_t config) const {
  const auto& per_var = codes[static_cast<std::size_t>(id)];
  if (config >= per_var.size() || !per_var[config]) return nullptr;
  return &*per_var[config];
}

std::vector<std::uint8_t> serialize(const Bitstream& stream) {
  std::vector<std::uint8_t> out(kStreamMagic.begin(), kStreamMagic.end());
  out.push_back(stream.version);
  put_u64(out, stream.count);
  out.insert(out.end(), stream.digest.begin(), stream.digest.end());
  out.insert(out.end(), stream.payload.begin(), stream.payload.end());
  return out;
}

Bitstream parse_bitstream(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kStreamHeaderSize) throw CorruptStream("stream shorter than header");
  if (!std::equal(kStreamMagic.begin(), kStreamMagic.end(), bytes.begin()))
    throw CorruptStream("bad stream magic");
  Bitstream s;
  s.version = bytes[4];
  if (s.version != kStreamVersion)
    throw CorruptStream("unsupported stream version " + std::to_string(s.version));
  s.count = get_u64(bytes.subspan(5, 8));
  std::copy_n(bytes.begin() + 13, s.digest.size(), s.digest.begin());
  s.payload.assign(bytes.begin() + static_cast<std::ptrdiff_t>(kStreamHeaderSize), bytes.end());
  s.payload_bits = static_cast<std::uint64_t>(s.payload.size()) * 8;
  return s;
}

PrefixCode build_joint_huffman(const JointTable& table, std::uint64_t limit) {
  if (table.probs.size() > limit)
    throw SizeGuardError("joint alphabet of " + std::to_string(table.probs.size()) +
                         " symbols exceeds size guard " + std::to_string(limit));
  return PrefixCode::build(table.probs);
}

FactorizedCodebook build_factorized_codebooks(const BayesNet& net) {
  FactorizedCodebook fcb;
  fcb.net = net;
  fcb.digest = net_digest(net);
  fcb.codes.resize(static_cast<std::size_t>(net.size()));
  for (int i : net.order) {
    const JointTable pa = marginal(net, net.parents(i));
    auto& per_var = fcb.codes[static_cast<std::size_t>(i)];
    per_var.resize(pa.probs.size());
    for (std::size_t r = 0; r < pa.probs.size(); ++r) {
      if (pa.probs[r] <= 0.0) continue;
      auto row = net.row(i, r);
      per_var[r] = PrefixCode::build(row);
      ++fcb.distributions_built;
      fcb.entries_touched += row.size();
    }
  }
  return fcb;
}

Bitstream encode(const FactorizedCodebook& fcb, std::span<const StateVector> samples) {
  const BayesNet& net = fcb.net;
  Bitstream stream;
  stream.count = samples.size();
  stream.digest = fcb.digest;
  BitWriter out;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const StateVector& x = samples[s];
    if (static_cast<int>(x.size()) != net.size())
      throw InvalidState("sample " + std::to_string(s) + " has " + std::to_string(x.size()) +
                         " states, expected " + std::to_string(net.size()));
    for (int i = 0; i < net.size(); ++i)
      if (x[i] < 0 || x[i] >= net.cardinality(i))
        throw InvalidState("sample " + std::to_string(s) + ": state " + std::to_string(x[i]) +
                           " out of range for '" + net.variables[i].name + "'");
    for (int i : net.order) {
      const PrefixCode* code = fcb.code(i, net.parent_configuration(i, x));
      if (code == nullptr || !code->has_codeword(static_cast<std::size_t>(x[i])))
        throw UncodableSample("sample " + std::to_string(s) + " has zero probability at '" +
                              net.variables[i].name + "'");
      code->write(static_cast<std::size_t>(x[i]), out);
    }
  }
  stream.payload_bits = out.bit_count();
  stream.payload = out.take();
  return stream;
}

std::vector<StateVector> decode(const FactorizedCodebook& fcb, const Bitstream& stream) {
  if (stream.digest != fcb.digest)
    throw WrongCodebook("stream digest " + to_hex(stream.digest) +
                        " does not match codebook network " + to_hex(fcb.digest));
  const BayesNet& net = fcb.net;
  BitReader in(stream.payload);
  std::vector<StateVector> out;
  out.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(stream.count, 1u << 20)));
  for (std::uint64_t s = 0; s < stream.count; ++s) {
    StateVector x(static_cast<std::size_t>(net.size()), 0);
    for (int i : net.order) {
      const PrefixCode* code = fcb.code(i, net.parent_configuration(i, x));
      if (code == nullptr) throw CorruptStream("decoded a zero-probability parent configuration");
      x[i] = static_cast<int>(code->read(in));
    }
    out.push_back(std::move(x));
  }
  // Only zero padding inside the final byte may remain.
  const std::uint64_t rest = in.capacity() - in.position();
  if (rest >= 8) throw CorruptStream("payload longer than the declared vector count");
  for (std::uint64_t b = 0; b < rest; ++b)
    if (in.get()) throw CorruptStream("nonzero padding bits");
  return out;
}

double expected_length(const FactorizedCodebook& fcb) {
  const BayesNet& net = fcb.net;
  double total = 0.0;
  for (int i = 0; i < net.size(); ++i) {
    const JointTable pa = marginal(net, net.parents(i));
    for (std::size_t r = 0; r < pa.probs.size(); ++r) {
      if (pa.probs[r] <= 0.0) continue;
      total += pa.probs[r] * fcb.code(i, r)->expected_length(net.row(i, r));
    }
  }
  return total;
}

double expected_length(const PrefixCode& code, const JointTable& table) {
  return code.expected_length(table.probs);
}

ComplexityReport complexity_report(const BayesNet& net, std::uint64_t limit) {
  ComplexityReport r;
  r.variables = net.size();
  r.max_cardinality = net.max_cardinality();
  r.max_in_degree = net.max_in_degree();
  r.joint_alphabet = 1.0;
  for (const auto& v : net.variables) r.joint_alphabet *= v.cardinality;
  const double k = r.max_cardinality;
  r.factorized_distribution_bound = r.variables * std::pow(k, r.max_in_degree);
  r.factorized_entry_bound = r.factorized_distribution_bound * k;

  auto start = std::chrono::steady_clock::now();
  const FactorizedCodebook fcb = build_factorized_codebooks(net);
  r.factorized_build_ms = elapsed_ms(start);
  r.factorized_distributions = fcb.distributions_built;
  r.factorized_entries = fcb.entries_touched;

  if (net.joint_states() > limit) {
    r.joint_note = "skipped: exceeds guard (" + std::to_string(limit) + ")";
  } else {
    start = std::chrono::steady_clock::now();
    const JointTable table = enumerate_joint(net, limit);
    const PrefixCode joint = build_joint_huffman(table, limit);
    r.joint_build_ms = elapsed_ms(start);
    (void)joint;
    r.joint_note = "built";
  }
  return r;
}

}  // namespace semrd
