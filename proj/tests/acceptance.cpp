// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "random_nets.hpp"
#include "semrd/bounds.hpp"
#include "semrd/codec.hpp"
#include "semrd/errors.hpp"
#include "semrd/info.hpp"
#include "semrd/network_io.hpp"
#include "semrd/networks.hpp"
#include "semrd/rd.hpp"

using namespace semrd;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, const std::function<Outcome()>& body) {
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::printf("criterion %d %-28s %s  %s\n", id, name, o.pass ? "PASS" : "FAIL", o.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

std::vector<BayesNet> random_nets(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<BayesNet> nets;
  for (int t = 0; t < count; ++t) {
    const bool ternary = t % 2 == 1;
    const int max_nodes = ternary ? 8 : 12;
    const int m = 2 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_nodes - 1));
    nets.push_back(testing::random_network(rng, m, ternary ? 3 : 2, 3));
  }
  return nets;
}

std::vector<std::string> bundled() {
  return {"fig4a.json", "fig4b.json", "scene.json"};
}

Matrix doubly_symmetric(double p) {
  Matrix m(2, 2);
  m(0, 0) = m(1, 1) = (1 - p) / 2;
  m(0, 1) = m(1, 0) = p / 2;
  return m;
}

Outcome entropy_oracle(const std::vector<BayesNet>& nets) {
  const auto t0 = Clock::now();
  double worst = 0;
  for (const auto& net : nets)
    worst = std::max(worst, std::fabs(joint_entropy_factorized(net) -
                                      joint_entropy_bruteforce(enumerate_joint(net))));
  const double secs = seconds_since(t0);
  return {worst <= 1e-9 && secs < 30.0,
          fmt("nets=200 max|diff|=%.3g bits time=%.2fs", worst, secs)};
}

Outcome redundancy(const std::vector<BayesNet>& nets) {
  double lowest = 1e300, worst = 0;
  for (const auto& net : nets) {
    const double gap = redundancy_gap_raw(net);
    double mi = 0;
    for (int i = 0; i < net.size(); ++i) mi += parent_mutual_information(net, i);
    lowest = std::min(lowest, gap);
    worst = std::max(worst, std::fabs(gap - mi));
  }
  return {lowest >= -1e-9 && worst <= 1e-9,
          fmt("min gap=%.3g max|gap-sum I|=%.3g", lowest, worst)};
}

Outcome codec() {
  bool ok = true;
  std::string detail;
  for (const auto& name : bundled()) {
    const auto t0 = Clock::now();
    const BayesNet net = load_network(fs::path(SEMRD_NETWORK_DIR) / name);
    const JointTable joint = enumerate_joint(net);
    const double h = joint_entropy_bruteforce(joint);
    const FactorizedCodebook fcb = build_factorized_codebooks(net);
    const auto xs = sample(net, 20240601, 100000);
    const auto back = decode(fcb, parse_bitstream(serialize(encode(fcb, xs))));
    const double lf = expected_length(fcb);
    const double lj = expected_length(build_joint_huffman(joint), joint);
    const double secs = seconds_since(t0);
    const bool net_ok = back == xs && lf >= h - 1e-9 && lf < h + net.size() && lj >= h - 1e-9 &&
                        lj < h + 1 && lj <= lf + 1e-12 && secs < 10.0;
    ok = ok && net_ok;
    detail += name + fmt(" [H=%.4f Lf=%.4f Lj=%.4f %.2fs", h, lf, lj, secs) +
              (back == xs ? " exact]" : " MISMATCH]") + " ";
  }
  return {ok, detail};
}

Outcome complexity() {
  const BayesNet chain = binary_chain(20, 0.1);
  const auto t0 = Clock::now();
  const FactorizedCodebook fcb = build_factorized_codebooks(chain);
  const double ms = seconds_since(t0) * 1e3;
  const ComplexityReport r = complexity_report(chain, std::uint64_t{1} << 19);
  bool refused = false;
  try {
    build_joint_huffman(enumerate_joint(chain, std::uint64_t{1} << 19), std::uint64_t{1} << 19);
  } catch (const SizeGuardError&) {
    refused = true;
  }
  const bool ok = fcb.entries_touched <= 80 && ms < 50.0 && refused &&
                  !r.joint_build_ms.has_value() && r.joint_alphabet == 1048576.0;
  return {ok, fmt("entries=%.0f (limit 80) joint alphabet=%.0f build=%.3fms joint refused=%.0f",
                  static_cast<double>(fcb.entries_touched), r.joint_alphabet, ms, refused ? 1 : 0)};
}

Outcome binary_closed_form() {
  const auto t0 = Clock::now();
  double worst = 0;
  bool converged = true;
  for (double p : {0.05, 0.1, 0.2, 0.3}) {
    for (int j = 1; j <= 9; ++j) {
      const double dist = p * j / 9;
      const RdPoint pt = ba_conditional_target(doubly_symmetric(p), hamming_distortion(2), dist);
      converged = converged && pt.converged;
      worst = std::max(worst, std::fabs(pt.rate - binary_conditional_rd(p, dist)));
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-4 && converged && secs < 5.0,
          fmt("points=36 max|err|=%.3g bits time=%.2fs", worst, secs)};
}

Outcome gaussian_closed_form() {
  const double one = gaussian_conditional_rd(1.0, 0.0, 0.25);
  const double boundary_a = gaussian_conditional_rd(1.0, 0.0, 1.0);
  const double boundary_b = gaussian_conditional_rd(2.0, 0.6, 4.0 * (1 - 0.36));
  return {one == 1.0 && boundary_a == 0.0 && boundary_b == 0.0,
          fmt("R(1,0,0.25)=%.12g R(boundary)=%.3g,%.3g", one, boundary_a, boundary_b)};
}

Outcome sandwich() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(777);
  int checked = 0, skipped = 0, violations = 0;
  double worst = 0;
  const double fractions[] = {0.1, 0.3, 0.5, 0.7, 0.9};
  for (int t = 0; t < 50; ++t) {
    const int m = 2 + static_cast<int>(rng() % 3);
    const BayesNet net = testing::random_network(rng, m, 3, 3, true);
    const auto kind = t % 3 == 2 ? DistortionKind::kSquaredError : DistortionKind::kHamming;
    const auto d = DistortionSpec::preset(kind, net);
    const auto top = target_grid(net, d, 1);
    for (double f : fractions) {
      std::vector<double> targets;
      for (int i = 0; i < m; ++i) targets.push_back(f * top[static_cast<std::size_t>(i)][0]);
      const BoundReport r = lemma1_bounds(net, targets, d);
      if (!r.all_converged()) {
        ++skipped;
        continue;
      }
      ++checked;
      if (!r.ordered()) ++violations;
      worst = std::max({worst, -r.slack_lower, -r.slack_upper});
    }
  }
  const double secs = seconds_since(t0);
  return {violations == 0 && checked > 0 && secs < 300.0,
          fmt("points=%.0f unconverged=%.0f violations=%.0f worst overshoot=%.3g",
              checked, skipped, violations, worst) +
              fmt(" time=%.1fs", secs)};
}

Outcome separability() {
  double worst = 0;
  bool converged = true;
  const double targets[] = {0.05, 0.05, 0.05};
  for (double p1 : {0.05, 0.1, 0.2, 0.3}) {
    for (double p2 : {0.05, 0.1, 0.2, 0.3}) {
      for (int shape = 0; shape < 2; ++shape) {
        const BayesNet net = shape == 0 ? binary_fork(p1, p2) : binary_chain3(p1, p2);
        const int side[] = {shape == 0 ? 0 : 1};
        const auto r = lemma2_check(net, side, targets,
                                    DistortionSpec::preset(DistortionKind::kHamming, net));
        converged = converged && r.all_converged();
        worst = std::max(worst, std::fabs(r.difference()));
      }
    }
  }
  const BayesNet fig = load_network(fs::path(SEMRD_NETWORK_DIR) / "fig4a.json");
  const int side[] = {0};
  const auto r = lemma2_check(fig, side, targets, DistortionSpec::preset(DistortionKind::kHamming, fig));
  const double expected = 2 * (binary_entropy(0.1) - binary_entropy(0.05));
  const double err = std::fabs(r.joint_conditional - 0.36520);
  return {worst <= 2e-4 && converged && err <= 2e-4 &&
              std::fabs(r.joint_conditional - expected) <= 2e-4,
          fmt("cases=32 max|joint-sum|=%.3g fig4a joint=%.6f expected=%.6f", worst,
              r.joint_conditional, expected)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / "semrd_acceptance";
  fs::create_directories(dir);
  const std::string cli = SEMRD_CLI_PATH;
  const std::string nets = SEMRD_NETWORK_DIR;
  const std::string a = nets + "/fig4a.json", b = nets + "/fig4b.json", s = nets + "/scene.json";
  const std::string samples = (dir / "samples.txt").string();
  const std::string stream = (dir / "stream.smrd").string();
  const std::vector<std::string> cmds = {
      "verify " + a, "verify " + b, "verify " + s,
      "entropy " + s, "entropy " + a,
      "sample " + s + " -n 2000 --seed 5",
      "encode " + s + " " + samples + " -o {OUT}",
      "decode " + s + " " + stream,
      "codec-report " + s, "codec-report " + b,
      "rd " + a + " --slopes -0.5,-1,-2,-4",
      "rd " + s + " --vars outdoor,sky --targets 0.1,0.1",
      "rd-cond " + a + " --side Y --targets 0.05,0.05",
      "rd-cond " + b + " --side Y --slopes -1,-3",
      "rd-closed-form binary --p 0.1 --D 0.01,0.05,0.1",
      "rd-closed-form gaussian --sigma 1 --r 0.8 --D 0.09",
      "bounds " + b + " --targets 0.1,0.1,0.1",
      "bounds " + s + " --targets 0.1,0.1,0.1,0.3",
      "lemma2 " + a + " --side Y --targets 0.05",
      "lemma2 " + s + " --side outdoor --targets 0.1",
  };
  if (std::system((cli + " sample " + s + " -n 2000 --seed 5 -o " + samples).c_str()) != 0 ||
      std::system((cli + " encode " + s + " " + samples + " -o " + stream + " > /dev/null").c_str()) != 0)
    return {false, "could not prepare sample and stream files"};

  int differing = 0, failed = 0;
  std::string first_bad;
  for (std::size_t i = 0; i < cmds.size(); ++i) {
    std::string outputs[2];
    for (int run = 0; run < 2; ++run) {
      const fs::path out = dir / ("out" + std::to_string(i) + "_" + std::to_string(run));
      std::string cmd = cmds[i];
      const auto at = cmd.find("{OUT}");
      if (at != std::string::npos) cmd.replace(at, 5, (out.string() + ".bin"));
      const int rc = std::system((cli + " " + cmd + " > " + out.string() + " 2>&1").c_str());
      if (rc != 0) ++failed;
      outputs[run] = slurp(out) + (at != std::string::npos ? slurp(out.string() + ".bin") : "");
    }
    if (outputs[0] != outputs[1]) {
      ++differing;
      if (first_bad.empty()) first_bad = cmds[i];
    }
  }
  return {differing == 0 && failed == 0,
          fmt("commands=%.0f differing=%.0f nonzero exits=%.0f", static_cast<double>(cmds.size()),
              differing, failed) +
              (first_bad.empty() ? "" : " first=" + first_bad)};
}

}  // namespace

int main() {
  const auto nets = random_nets(200, 20240517);
  report(1, "entropy-oracle", [&] { return entropy_oracle(nets); });
  report(2, "redundancy-gap", [&] { return redundancy(nets); });
  report(3, "lossless-codec", codec);
  report(4, "factorized-complexity", complexity);
  report(5, "binary-closed-form", binary_closed_form);
  report(6, "gaussian-closed-form", gaussian_closed_form);
  report(7, "rate-sandwich", sandwich);
  report(8, "side-info-separability", separability);
  report(9, "cli-determinism", determinism);
  std::printf("%s: %d of 9 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
