#include <random>

#include "doctest.h"
#include "semrd/errors.hpp"
#include "semrd/huffman.hpp"
#include "semrd/info.hpp"

using namespace semrd;

TEST_CASE("dyadic weights get exact lengths and fixed codewords") {
  const double w[] = {0.5, 0.25, 0.25};
  const PrefixCode code = PrefixCode::build(w);
  CHECK(code.length(0) == 1);
  CHECK(code.length(1) == 2);
  CHECK(code.length(2) == 2);
  CHECK(code.codeword(0) == "0");
  CHECK(code.codeword(1) == "10");
  CHECK(code.codeword(2) == "11");
  CHECK(code.kraft_sum() == 1.0);
  CHECK(code.expected_length(w) == doctest::Approx(entropy(w)).epsilon(1e-15));
}

TEST_CASE("uniform four symbols") {
  const double w[] = {1, 1, 1, 1};
  const PrefixCode code = PrefixCode::build(w);
  for (std::size_t s = 0; s < 4; ++s) CHECK(code.length(s) == 2);
  CHECK(code.codeword(0) == "00");
  CHECK(code.codeword(3) == "11");
}

TEST_CASE("zero weights and single symbols") {
  const double w[] = {0.0, 0.7, 0.3, 0.0};
  const PrefixCode code = PrefixCode::build(w);
  CHECK_FALSE(code.has_codeword(0));
  CHECK(code.length(3) == -1);
  CHECK(code.length(1) == 1);

  const double one[] = {0.0, 1.0};
  const PrefixCode single = PrefixCode::build(one);
  CHECK(single.length(1) == 0);
  BitWriter out;
  single.write(1, out);
  CHECK(out.bit_count() == 0);
  const std::vector<std::uint8_t> none;
  BitReader in(none);
  CHECK(single.read(in) == 1);

  const double zeros[] = {0.0, 0.0};
  CHECK_THROWS_AS(PrefixCode::build(zeros), InvalidArgument);
  const double negative[] = {0.5, -0.1};
  CHECK_THROWS_AS(PrefixCode::build(negative), InvalidArgument);
}

TEST_CASE("random codes are complete, optimal-range and decodable") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> w(2 + rng() % 30);
    double sum = 0.0;
    for (auto& x : w) sum += (x = u(rng));
    for (auto& x : w) x /= sum;
    const PrefixCode code = PrefixCode::build(w);
    CHECK(code.kraft_sum() == doctest::Approx(1.0).epsilon(1e-15));
    const double h = entropy(w), len = code.expected_length(w);
    CHECK(len >= h - 1e-12);
    CHECK(len < h + 1.0);

    BitWriter out;
    for (std::size_t s = 0; s < w.size(); ++s) code.write(s, out);
    const auto bytes = out.take();
    BitReader in(bytes);
    for (std::size_t s = 0; s < w.size(); ++s) CHECK(code.read(in) == s);
  }
}

TEST_CASE("reader reports exhaustion") {
  const std::vector<std::uint8_t> one_byte = {0xA5};
  BitReader in(one_byte);
  for (int i = 0; i < 8; ++i) CHECK(in.get() == ((0xA5 >> (7 - i)) & 1));
  CHECK_THROWS_AS(in.get(), CorruptStream);
}
