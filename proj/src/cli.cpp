#include "semrd/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "semrd/bayes_net.hpp"
#include "semrd/bounds.hpp"
#include "semrd/codec.hpp"
#include "semrd/errors.hpp"
#include "semrd/info.hpp"
#include "semrd/network_io.hpp"
#include "semrd/rd.hpp"

namespace semrd {

std::string format_number(double v) {
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace {

constexpr double kOracleTolerance = 1e-9;

std::uint64_t effective_guard(const RunConfig& cfg) {
  if (cfg.size_guard == 0) return size_guard_from_env();
  return cfg.size_guard;
}

RdOptions rd_options(const RunConfig& cfg) {
  RdOptions o;
  o.gap_tol_nats = cfg.gap_tol_nats;
  o.target_tol = cfg.target_tol;
  o.max_iters = cfg.max_iters;
  o.size_limit = effective_guard(cfg);
  return o;
}

int resolve_variable(const BayesNet& net, const std::string& ref) {
  for (const auto& v : net.variables)
    if (v.name == ref) return v.id;
  if (!ref.empty() && std::all_of(ref.begin(), ref.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    const int id = std::stoi(ref);
    if (id < net.size()) return id;
  }
  throw InvalidArgument("unknown variable '" + ref + "'");
}

std::vector<int> resolve_variables(const BayesNet& net, const std::vector<std::string>& refs) {
  std::vector<int> ids;
  for (const auto& r : refs) {
    const int id = resolve_variable(net, r);
    if (std::find(ids.begin(), ids.end(), id) != ids.end())
      throw InvalidArgument("variable '" + r + "' listed twice");
    ids.push_back(id);
  }
  return ids;
}

std::string brace_list(const BayesNet& net, const std::vector<int>& ids) {
  std::string s = "{";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) s += ",";
    s += net.variables[static_cast<std::size_t>(ids[i])].name;
  }
  return s + "}";
}

// Writes to the named file, or to `out` when the name is empty or "-".
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (!path.empty() && path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw std::runtime_error(path + ": cannot open for writing");
      stream_ = &file_;
    } else {
      stream_ = &fallback;
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

std::vector<StateVector> read_samples(const std::string& path, const BayesNet& net) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open file");
  std::vector<StateVector> samples;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    StateVector x;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      try {
        std::size_t used = 0;
        x.push_back(std::stoi(field, &used));
        if (used != field.size()) throw std::invalid_argument(field);
      } catch (const std::exception&) {
        throw InvalidArgument(path + ":" + std::to_string(lineno) + ": bad state '" + field + "'");
      }
    }
    if (static_cast<int>(x.size()) != net.size())
      throw InvalidArgument(path + ":" + std::to_string(lineno) + ": expected " +
                            std::to_string(net.size()) + " states, got " + std::to_string(x.size()));
    samples.push_back(std::move(x));
  }
  return samples;
}

void write_samples(std::ostream& os, const std::vector<StateVector>& samples) {
  for (const auto& x : samples) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (i) os << ',';
      os << x[i];
    }
    os << '\n';
  }
}

std::vector<std::uint8_t> read_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open file");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// --- subcommands ---------------------------------------------------------

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const BayesNet net = load_network(cfg.inputs.at(0));
  const std::uint64_t guard = effective_guard(cfg);
  bool pass = true;
  out << "network: " << cfg.inputs[0] << " (" << net.size() << " variables, "
      << net.joint_states() << " joint states)\n";
  const auto report = validate(net);
  out << "validate: " << (report.ok() ? "ok" : report.summary()) << "\n";
  pass = pass && report.ok();

  if (net.joint_states() > guard) {
    out << "entropy oracle: skipped (joint table exceeds guard)\n";
    out << "partition check: skipped (joint table exceeds guard)\n";
  } else {
    const JointTable joint = enumerate_joint(net, guard);
    const double hf = joint_entropy_factorized(net);
    const double hb = joint_entropy_bruteforce(joint);
    const bool ok = std::fabs(hf - hb) <= kOracleTolerance;
    out << "entropy oracle: factorized " << format_number(hf) << " bruteforce "
        << format_number(hb) << " " << (ok ? "ok" : "MISMATCH") << "\n";
    pass = pass && ok;

    for (int y = 0; y < net.size(); ++y) {
      const int side[1] = {y};
      const Partition part = conditional_partition(net, side);
      double worst = 0.0;
      for (std::size_t a = 0; a < part.blocks.size(); ++a)
        for (std::size_t b = a + 1; b < part.blocks.size(); ++b)
          worst = std::max(worst, conditional_mutual_information(joint, part.blocks[a],
                                                                 part.blocks[b], part.side_set));
      const bool pok = worst <= kOracleTolerance;
      out << "partition given " << brace_list(net, part.side_set) << ":";
      for (const auto& b : part.blocks) out << " " << brace_list(net, b);
      out << " max CMI " << format_number(worst) << " " << (pok ? "ok" : "FAIL") << "\n";
      pass = pass && pok;
    }
  }
  out << "verify: " << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? kExitOk : kExitFailure;
}

int cmd_entropy(const RunConfig& cfg, const std::string& csv_path, std::ostream& out) {
  const BayesNet net = load_network(cfg.inputs.at(0));
  const std::uint64_t guard = effective_guard(cfg);
  std::ostringstream csv;
  csv << "variable,cardinality,parents,H_marginal_bits,H_given_parents_bits,I_parents_bits\n";
  out << std::left << std::setw(16) << "variable" << std::setw(8) << "card" << std::setw(24)
      << "parents" << std::setw(18) << "H(X)" << std::setw(18) << "H(X|Pa)"
      << "I(X;Pa)\n";
  for (int i = 0; i < net.size(); ++i) {
    const int self[1] = {i};
    const double hm = entropy(marginal(net, self, guard).probs);
    const double hc = node_conditional_entropy(net, i);
    const double mi = std::max(0.0, hm - hc);
    std::string parents;
    for (int p : net.parents(i)) parents += (parents.empty() ? "" : " ") + net.variables[p].name;
    out << std::setw(16) << net.variables[i].name << std::setw(8) << net.cardinality(i)
        << std::setw(24) << (parents.empty() ? "-" : parents) << std::setw(18) << format_number(hm)
        << std::setw(18) << format_number(hc) << format_number(mi) << "\n";
    csv << net.variables[i].name << "," << net.cardinality(i) << "," << parents << ","
        << format_number(hm) << "," << format_number(hc) << "," << format_number(mi) << "\n";
  }
  const double hf = joint_entropy_factorized(net);
  out << "joint entropy (factorized): " << format_number(hf) << " bits\n";
  if (net.joint_states() <= guard) {
    const JointTable joint = enumerate_joint(net, guard);
    out << "joint entropy (bruteforce): " << format_number(joint_entropy_bruteforce(joint))
        << " bits\n";
    out << "redundancy gap: " << format_number(redundancy_gap(net, guard)) << " bits\n";
  } else {
    out << "joint entropy (bruteforce): skipped (exceeds guard)\n";
    out << "redundancy gap: skipped (exceeds guard)\n";
  }
  if (!csv_path.empty()) {
    Sink sink(csv_path, out);
    sink.get() << csv.str();
  }
  return kExitOk;
}

int cmd_sample(const RunConfig& cfg, std::size_t n, std::ostream& out) {
  const BayesNet net = load_network(cfg.inputs.at(0));
  Sink sink(cfg.output, out);
  write_samples(sink.get(), sample(net, cfg.seed, n));
  return kExitOk;
}

int cmd_encode(const RunConfig& cfg, std::ostream& out) {
  const BayesNet net = load_network(cfg.inputs.at(0));
  const auto samples = read_samples(cfg.inputs.at(1), net);
  const FactorizedCodebook fcb = build_factorized_codebooks(net);
  const Bitstream stream = encode(fcb, samples);
  const auto bytes = serialize(stream);
  std::ofstream file(cfg.output, std::ios::binary);
  if (!file) throw std::runtime_error(cfg.output + ": cannot open for writing");
  file.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  out << "encoded " << samples.size() << " vectors into " << stream.payload_bits
      << " payload bits (" << bytes.size() << " bytes)\n";
  return kExitOk;
}

int cmd_decode(const RunConfig& cfg, std::ostream& out) {
  const BayesNet net = load_network(cfg.inputs.at(0));
  const auto bytes = read_binary(cfg.inputs.at(1));
  const FactorizedCodebook fcb = build_factorized_codebooks(net);
  const auto samples = decode(fcb, parse_bitstream(bytes));
  Sink sink(cfg.output, out);
  write_samples(sink.get(), samples);
  return kExitOk;
}

int cmd_codec_report(const RunConfig& cfg, bool timings, std::ostream& out) {
  const BayesNet net = load_network(cfg.inputs.at(0));
  const std::uint64_t guard = effective_guard(cfg);
  const ComplexityReport r = complexity_report(net, guard);
  out << "variables (m): " << r.variables << "\n"
      << "max cardinality (k): " << r.max_cardinality << "\n"
      << "max parents (L): " << r.max_in_degree << "\n"
      << "joint alphabet: " << format_number(r.joint_alphabet) << "\n"
      << "factorized distribution bound (m*k^L): " << format_number(r.factorized_distribution_bound) << "\n"
      << "factorized entry bound (m*k^L*k): " << format_number(r.factorized_entry_bound) << "\n"
      << "factorized distributions built: " << r.factorized_distributions << "\n"
      << "factorized entries touched: " << r.factorized_entries << "\n"
      << "joint codebook: " << r.joint_note << "\n";
  if (timings) {
    out << "factorized build ms: " << format_number(r.factorized_build_ms) << "\n";
    if (r.joint_build_ms) out << "joint build ms: " << format_number(*r.joint_build_ms) << "\n";
  }
  const FactorizedCodebook fcb = build_factorized_codebooks(net);
  const double h = joint_entropy_factorized(net);
  out << "entropy: " << format_number(h) << " bits\n"
      << "factorized expected length: " << format_number(expected_length(fcb)) << " bits\n";
  if (net.joint_states() <= guard) {
    const JointTable joint = enumerate_joint(net, guard);
    out << "joint expected length: "
        << format_number(expected_length(build_joint_huffman(joint, guard), joint)) << " bits\n";
  }
  return kExitOk;
}

void write_rd_csv(std::ostream& os, const std::vector<RdPoint>& pts, std::size_t m,
                  const std::vector<std::string>& errors) {
  for (std::size_t i = 0; i < m; ++i) os << "slope_" << i + 1 << ",";
  os << "rate_bits";
  for (std::size_t i = 0; i < m; ++i) os << ",D_" << i + 1;
  os << ",converged,iterations\n";
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const RdPoint& p = pts[k];
    if (!errors.empty() && !errors[k].empty()) {
      for (std::size_t i = 0; i < m; ++i) os << ",";
      os << "nan";
      for (std::size_t i = 0; i < m; ++i) os << ",nan";
      os << ",false,0\n";
      continue;
    }
    for (std::size_t i = 0; i < m; ++i) os << format_number(p.slopes[i]) << ",";
    os << format_number(p.rate);
    for (std::size_t i = 0; i < m; ++i) os << "," << format_number(p.distortions[i]);
    os << "," << (p.converged ? "true" : "false") << "," << p.iterations << "\n";
  }
}

// Shared by `rd` and `rd-cond`: targets are lists of m values separated by
// ',' with multiple points separated by ';'.
int cmd_rd(const RunConfig& cfg, const std::vector<std::string>& var_refs,
           const std::vector<std::string>& side_refs, const std::string& distortion,
           const std::vector<std::string>& target_points, const std::vector<double>& slopes,
           std::ostream& out) {
  const BayesNet net = load_network(cfg.inputs.at(0));
  const std::uint64_t guard = effective_guard(cfg);
  const std::vector<int> side = resolve_variables(net, side_refs);
  std::vector<int> xs;
  if (var_refs.empty()) {
    for (int i = 0; i < net.size(); ++i)
      if (std::find(side.begin(), side.end(), i) == side.end()) xs.push_back(i);
  } else {
    xs = resolve_variables(net, var_refs);
  }
  for (int x : xs)
    if (std::find(side.begin(), side.end(), x) != side.end())
      throw InvalidArgument("variable '" + net.variables[x].name + "' is both coded and side information");
  if (xs.empty()) throw InvalidArgument("no variables to code");

  const JointTable joint = enumerate_joint(net, guard);
  const RdSource src = RdSource::from_table(joint, xs, side);
  const DistortionKind kind = parse_distortion_kind(distortion);
  std::vector<Matrix> ds;
  for (int x : xs) ds.push_back(make_distortion(kind, net.cardinality(x)));
  const RdOptions opts = rd_options(cfg);

  std::vector<RdPoint> pts;
  std::vector<std::string> errors;
  if (!slopes.empty()) {
    const RdCurve curve = rd_curve(src, ds, slopes, opts);
    pts = curve.points;
    errors = curve.errors;
  } else {
    for (const auto& point : target_points) {
      std::vector<double> t;
      std::stringstream ss(point);
      std::string f;
      while (std::getline(ss, f, ',')) t.push_back(std::stod(f));
      if (t.size() == 1) t.assign(xs.size(), t[0]);
      if (t.size() != xs.size())
        throw InvalidArgument("each target point needs " + std::to_string(xs.size()) + " values");
      pts.push_back(ba_joint_multi_target(src, ds, t, opts));
      errors.emplace_back();
    }
  }
  Sink sink(cfg.output, out);
  write_rd_csv(sink.get(), pts, xs.size(), errors);
  return kExitOk;
}

int cmd_closed_form(const std::string& family, double p, double sigma, double r,
                    const std::vector<double>& ds, std::ostream& out) {
  auto eval = [&](double d) {
    if (family == "binary") return binary_conditional_rd(p, d);
    if (family == "gaussian") return gaussian_conditional_rd(sigma, r, d);
    throw InvalidArgument("closed form must be 'binary' or 'gaussian'");
  };
  if (ds.size() == 1) {
    out << format_number(eval(ds[0])) << "\n";
    return kExitOk;
  }
  out << "D,rate_bits\n";
  for (double d : ds) out << format_number(d) << "," << format_number(eval(d)) << "\n";
  return kExitOk;
}

std::vector<double> expand_targets(const BayesNet& net, const std::vector<int>& side,
                                   const std::vector<double>& given) {
  std::vector<double> t(static_cast<std::size_t>(net.size()), 0.0);
  const std::size_t coded = static_cast<std::size_t>(net.size()) - side.size();
  if (given.size() == static_cast<std::size_t>(net.size())) return given;
  if (given.size() == 1) {
    std::fill(t.begin(), t.end(), given[0]);
    return t;
  }
  if (given.size() != coded)
    throw InvalidArgument("need 1, " + std::to_string(coded) + " or " + std::to_string(net.size()) +
                          " targets");
  std::size_t k = 0;
  for (int i = 0; i < net.size(); ++i)
    if (std::find(side.begin(), side.end(), i) == side.end()) t[static_cast<std::size_t>(i)] = given[k++];
  return t;
}

int cmd_bounds(const RunConfig& cfg, const std::string& distortion,
               const std::vector<double>& targets, std::ostream& out) {
  const BayesNet net = load_network(cfg.inputs.at(0));
  const auto d = DistortionSpec::preset(parse_distortion_kind(distortion), net);
  const auto t = expand_targets(net, {}, targets);
  const BoundReport r = lemma1_bounds(net, t, d, rd_options(cfg));
  Sink sink(cfg.output, out);
  auto& os = sink.get();
  os << "term,variable,target,rate_bits,converged\n";
  for (int i = 0; i < net.size(); ++i) {
    const auto& lt = r.lower_terms[static_cast<std::size_t>(i)];
    const auto& ut = r.upper_terms[static_cast<std::size_t>(i)];
    os << "conditional," << net.variables[i].name << "," << format_number(t[i]) << ","
       << format_number(lt.rate) << "," << (lt.converged ? "true" : "false") << "\n";
    os << "marginal," << net.variables[i].name << "," << format_number(t[i]) << ","
       << format_number(ut.rate) << "," << (ut.converged ? "true" : "false") << "\n";
  }
  os << "lower,,," << format_number(r.lower) << ",\n"
     << "joint,,," << format_number(r.joint) << "," << (r.joint_converged ? "true" : "false") << "\n"
     << "upper,,," << format_number(r.upper) << ",\n"
     << "slack_lower,,," << format_number(r.slack_lower) << ",\n"
     << "slack_upper,,," << format_number(r.slack_upper) << ",\n"
     << "ordered,,," << (r.ordered() ? "true" : "false") << ",\n";
  return r.ordered() || !r.all_converged() ? kExitOk : kExitFailure;
}

int cmd_lemma2(const RunConfig& cfg, const std::vector<std::string>& side_refs,
               const std::string& distortion, const std::vector<double>& targets,
               std::ostream& out) {
  const BayesNet net = load_network(cfg.inputs.at(0));
  const auto side = resolve_variables(net, side_refs);
  const auto d = DistortionSpec::preset(parse_distortion_kind(distortion), net);
  const auto t = expand_targets(net, side, targets);
  const DecompositionReport r = lemma2_check(net, side, t, d, rd_options(cfg));
  Sink sink(cfg.output, out);
  auto& os = sink.get();
  os << "term,variables,rate_bits,converged\n";
  for (std::size_t b = 0; b < r.blocks.blocks.size(); ++b)
    os << "block," << brace_list(net, r.blocks.blocks[b]) << ","
       << format_number(r.block_rates[b].rate) << ","
       << (r.block_rates[b].converged ? "true" : "false") << "\n";
  os << "subset_sum,," << format_number(r.subset_sum) << ",\n"
     << "joint_conditional,," << format_number(r.joint_conditional) << ","
     << (r.joint_converged ? "true" : "false") << "\n"
     << "difference,," << format_number(r.difference()) << ",\n"
     << "agrees,," << (r.agrees() ? "true" : "false") << ",\n";
  if (r.joint_below_subset_sum())
    os << "note,,joint solve below subset sum beyond tolerance,\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"semrd: Bayesian-network source entropy, coding and rate-distortion toolkit"};
  app.require_subcommand(1);
  RunConfig cfg;
  app.add_option("--tol", cfg.gap_tol_nats, "Blahut-Arimoto bound gap tolerance (nats)")
      ->check(CLI::PositiveNumber);
  app.add_option("--target-tol", cfg.target_tol, "distortion target tolerance")
      ->check(CLI::PositiveNumber);
  app.add_option("--max-iters", cfg.max_iters, "iterations per slope point")
      ->check(CLI::PositiveNumber);
  app.add_option("--size-guard", cfg.size_guard, "joint-table size guard (<= 2^28)")
      ->check(CLI::Range(std::uint64_t{1}, kMaxSizeGuard));

  auto net_arg = [&](CLI::App* sub) {
    sub->add_option("net", cfg.inputs, "network JSON file")->required()->expected(1);
  };

  auto* verify = app.add_subcommand("verify", "validate a network and run oracle checks");
  net_arg(verify);

  std::string csv;
  auto* entropy_cmd = app.add_subcommand("entropy", "entropies and redundancy gap");
  net_arg(entropy_cmd);
  entropy_cmd->add_option("--csv", csv, "also write a CSV table");

  std::size_t n = 0;
  auto* sample_cmd = app.add_subcommand("sample", "ancestral samples, one vector per line");
  net_arg(sample_cmd);
  sample_cmd->add_option("-n,--count", n, "number of vectors")->required();
  sample_cmd->add_option("--seed", cfg.seed, "random seed");
  sample_cmd->add_option("-o,--output", cfg.output, "output file (default stdout)");

  auto* encode_cmd = app.add_subcommand("encode", "factorized Huffman encoding");
  encode_cmd->add_option("files", cfg.inputs, "<net-file> <samples-file>")->required()->expected(2);
  encode_cmd->add_option("-o,--output", cfg.output, "output stream file")->required();

  auto* decode_cmd = app.add_subcommand("decode", "decode a stream back to samples");
  decode_cmd->add_option("files", cfg.inputs, "<net-file> <stream-file>")->required()->expected(2);
  decode_cmd->add_option("-o,--output", cfg.output, "samples file (default stdout)");

  bool timings = false;
  auto* report_cmd = app.add_subcommand("codec-report", "codebook sizes and expected lengths");
  net_arg(report_cmd);
  report_cmd->add_flag("--timings", timings, "include measured build times");

  std::vector<std::string> vars, side;
  std::string distortion = "hamming";
  std::vector<std::string> target_points;
  std::vector<double> slopes;
  auto add_rd_options = [&](CLI::App* sub) {
    sub->add_option("--distortion", distortion, "hamming or squared");
    auto* t = sub->add_option("--targets", target_points,
                              "targets D1,...,Dm; repeat or separate points with ';'")
                  ->delimiter(';');
    auto* s = sub->add_option("--slopes", slopes, "common slope grid s1,s2,... (bits)")->delimiter(',');
    t->excludes(s);
    sub->add_option("-o,--output", cfg.output, "CSV file (default stdout)");
  };
  auto* rd_cmd = app.add_subcommand("rd", "joint multi-distortion rate-distortion");
  net_arg(rd_cmd);
  rd_cmd->add_option("--vars", vars, "variables to code (default all)")->delimiter(',');
  add_rd_options(rd_cmd);

  auto* rd_cond = app.add_subcommand("rd-cond", "conditional rate-distortion given side information");
  net_arg(rd_cond);
  rd_cond->add_option("--side", side, "side-information variables")->delimiter(',')->required();
  rd_cond->add_option("--vars", vars, "variables to code (default all non-side)")->delimiter(',');
  add_rd_options(rd_cond);

  std::string family;
  double p = 0.0, sigma = 1.0, r = 0.0;
  std::vector<double> dvals;
  auto* closed = app.add_subcommand("rd-closed-form", "closed-form conditional rate-distortion");
  closed->add_option("family", family, "binary or gaussian")
      ->required()
      ->check(CLI::IsMember({"binary", "gaussian"}));
  closed->add_option("--p", p, "crossover probability (binary)");
  closed->add_option("--sigma", sigma, "standard deviation (gaussian)");
  closed->add_option("--r", r, "correlation coefficient (gaussian)");
  closed->add_option("--D", dvals, "distortion value(s)")->required()->delimiter(',');

  std::vector<double> bound_targets;
  auto* bounds_cmd = app.add_subcommand("bounds", "lower/joint/upper rate sandwich");
  net_arg(bounds_cmd);
  bounds_cmd->add_option("--targets", bound_targets, "D1,...,Dm")->required()->delimiter(',');
  bounds_cmd->add_option("--distortion", distortion, "hamming or squared");
  bounds_cmd->add_option("-o,--output", cfg.output, "CSV file (default stdout)");

  auto* lemma2_cmd = app.add_subcommand("lemma2", "joint vs per-block conditional rates");
  net_arg(lemma2_cmd);
  lemma2_cmd->add_option("--side", side, "side-information variables")->delimiter(',')->required();
  lemma2_cmd->add_option("--targets", bound_targets, "targets for the non-side variables")
      ->required()
      ->delimiter(',');
  lemma2_cmd->add_option("--distortion", distortion, "hamming or squared");
  lemma2_cmd->add_option("-o,--output", cfg.output, "CSV file (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    const CLI::App* sub = app.get_subcommands().front();
    cfg.subcommand = sub->get_name();
    if (cfg.subcommand == "verify") return cmd_verify(cfg, out);
    if (cfg.subcommand == "entropy") return cmd_entropy(cfg, csv, out);
    if (cfg.subcommand == "sample") return cmd_sample(cfg, n, out);
    if (cfg.subcommand == "encode") return cmd_encode(cfg, out);
    if (cfg.subcommand == "decode") return cmd_decode(cfg, out);
    if (cfg.subcommand == "codec-report") return cmd_codec_report(cfg, timings, out);
    if (cfg.subcommand == "rd" || cfg.subcommand == "rd-cond") {
      if (target_points.empty() && slopes.empty()) {
        err << "error: " << cfg.subcommand << " needs --targets or --slopes\n";
        return kExitUsage;
      }
      return cmd_rd(cfg, vars, side, distortion, target_points, slopes, out);
    }
    if (cfg.subcommand == "rd-closed-form") return cmd_closed_form(family, p, sigma, r, dvals, out);
    if (cfg.subcommand == "bounds") return cmd_bounds(cfg, distortion, bound_targets, out);
    if (cfg.subcommand == "lemma2") return cmd_lemma2(cfg, side, distortion, bound_targets, out);
  } catch (const ValidationError& e) {
    err << "validation failed: " << e.what() << "\n";
    return kExitFailure;
  } catch (const SchemaError& e) {
    err << "schema error: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  err << "error: unknown subcommand\n";
  return kExitUsage;
}

}  // namespace semrd
