#include "semrd/rd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "semrd/errors.hpp"
#include "semrd/info.hpp"

namespace semrd {

namespace {

constexpr double kLn2 = 0.69314718055994530942;
constexpr double kNormTolerance = 1e-9;
constexpr double kMassFloor = 1e-15;
constexpr double kPruneMass = 1e-10;

void check_source(const RdSource& src, std::span<const Matrix> d) {
  if (src.cards.empty()) throw InvalidArgument("rate-distortion source has no coordinates");
  if (src.side_states < 1) throw InvalidArgument("side_states must be >= 1");
  if (d.size() != src.cards.size())
    throw InvalidArgument("need one distortion matrix per source coordinate");
  if (src.probs.size() != src.source_states() * static_cast<std::size_t>(src.side_states))
    throw InvalidArgument("source table size does not match its cardinalities");
  double sum = 0.0;
  for (double p : src.probs) {
    if (!(p >= 0.0) || !std::isfinite(p))
      throw InvalidArgument("source probabilities must be finite and nonnegative");
    sum += p;
  }
  if (std::fabs(sum - 1.0) > kNormTolerance)
    throw InvalidArgument("source probabilities sum to " + std::to_string(sum) + ", not 1");
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i].rows != static_cast<std::size_t>(src.cards[i]) || d[i].cols == 0)
      throw InvalidArgument("distortion matrix " + std::to_string(i) +
                            " must have one row per source state");
    if (!valid_distortion(d[i]))
      throw InvalidArgument("distortion entries must be finite and nonnegative");
  }
}

std::vector<std::vector<int>> decode_states(const std::vector<int>& cards, std::size_t n) {
  std::vector<std::vector<int>> out(n, std::vector<int>(cards.size()));
  for (std::size_t idx = 0; idx < n; ++idx) {
    std::size_t rest = idx;
    for (std::size_t i = cards.size(); i-- > 0;) {
      out[idx][i] = static_cast<int>(rest % static_cast<std::size_t>(cards[i]));
      rest /= static_cast<std::size_t>(cards[i]);
    }
  }
  return out;
}

// Blahut-Arimoto over a product reconstruction alphabet, one block per side
// value, with persistent reconstruction marginals for warm starts.
class MultiSolver {
 public:
  MultiSolver(const RdSource& src, std::span<const Matrix> d, const RdOptions& opts)
      : d_(d.begin(), d.end()), opts_(opts) {
    const std::size_t nx = src.source_states();
    const auto states = decode_states(src.cards, nx);
    for (int y = 0; y < src.side_states; ++y) {
      Block b;
      const double* row = src.probs.data() + static_cast<std::size_t>(y) * nx;
      b.weight = std::accumulate(row, row + nx, 0.0);
      if (b.weight <= 0.0) continue;
      for (std::size_t x = 0; x < nx; ++x) {
        if (row[x] <= 0.0) continue;
        b.p.push_back(row[x] / b.weight);
        b.x_states.push_back(states[x]);
      }
      b.recon.resize(d_.size());
      for (std::size_t i = 0; i < d_.size(); ++i) {
        b.recon[i].resize(d_[i].cols);
        std::iota(b.recon[i].begin(), b.recon[i].end(), 0);
      }
      rebuild(b);
      blocks_.push_back(std::move(b));
    }
  }

  // Pins coordinate `coord` to its best constant reconstruction per side value.
  void restrict_trivial(std::size_t coord) {
    for (auto& b : blocks_) {
      const Matrix& d = d_[coord];
      std::size_t best = 0;
      double best_cost = std::numeric_limits<double>::infinity();
      for (std::size_t xh = 0; xh < d.cols; ++xh) {
        double cost = 0.0;
        for (std::size_t x = 0; x < b.p.size(); ++x)
          cost += b.p[x] * d(static_cast<std::size_t>(b.x_states[x][coord]), xh);
        if (cost < best_cost) {
          best_cost = cost;
          best = xh;
        }
      }
      b.recon[coord] = {static_cast<int>(best)};
      rebuild(b);
    }
  }

  // Fixed-slope solve.
  RdPoint solve(std::span<const double> slopes) {
    revive();
    bool converged = false;
    int it = 0;
    while (it < opts_.max_iters) {
      ++it;
      if (update_marginals(slopes) < opts_.gap_tol_nats) {
        converged = true;
        break;
      }
    }
    RdPoint pt = finish(slopes);
    pt.iterations = it;
    pt.converged = converged;
    return pt;
  }

  // Target solve. Each iteration first picks the slopes for which the
  // channels induced by the current marginals meet the targets (a small
  // convex problem solved by projected Newton), then takes one Blahut step.
  // Coordinates outside `active` keep their slope.
  RdPoint solve_targets(std::span<const double> targets, const std::vector<std::size_t>& active,
                        std::vector<double>& slopes) {
    revive();
    bool converged = false;
    bool met = false;
    int it = 0;
    while (it < opts_.max_iters) {
      ++it;
      met = fit_slopes(targets, active, slopes);
      const double gap = update_marginals(slopes);
      if (gap < opts_.gap_tol_nats && met) {
        converged = true;
        break;
      }
    }
    met = fit_slopes(targets, active, slopes);
    RdPoint pt = finish(slopes);
    pt.iterations = it;
    pt.converged = converged && met;
    return pt;
  }

 private:
  struct Block {
    double weight = 0.0;
    std::vector<double> p;
    std::vector<std::vector<int>> x_states;
    std::vector<std::vector<int>> recon;
    std::size_t recon_size = 1;
    std::vector<std::vector<double>> dist;
    std::vector<std::vector<double>> row_min;
    std::vector<double> q;
    std::vector<double> kernel;  // 2^(sum_i s_i (d_i - row min)), each row peaks at 1
    std::vector<double> kernel_slopes;
  };

  // Warm starts keep every reconstruction symbol alive so that symbols
  // unused at a flatter slope can regain mass at a steeper one.
  void revive() {
    for (auto& b : blocks_) {
      double total = 0.0;
      for (auto& v : b.q) total += (v = std::max(v, kMassFloor));
      for (auto& v : b.q) v /= total;
    }
  }

  void fill_kernel(Block& b, std::span<const double> slopes) const {
    if (b.kernel_slopes.size() == slopes.size() &&
        std::equal(slopes.begin(), slopes.end(), b.kernel_slopes.begin()))
      return;
    const std::size_t nx = b.p.size(), nr = b.recon_size;
    b.kernel.resize(nx * nr);
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t r = 0; r < nr; ++r) {
        double e = 0.0;
        for (std::size_t i = 0; i < d_.size(); ++i)
          e += slopes[i] * (b.dist[i][x * nr + r] - b.row_min[i][x]);
        b.kernel[x * nr + r] = std::exp(kLn2 * e);
      }
    b.kernel_slopes.assign(slopes.begin(), slopes.end());
  }

  // One Blahut step q <- q c in every block. Returns the largest bound gap
  // max_r ln c - sum_r q c ln c (nats) seen before the step.
  double update_marginals(std::span<const double> slopes) {
    double worst = 0.0;
    for (auto& b : blocks_) {
      fill_kernel(b, slopes);
      const std::size_t nx = b.p.size(), nr = b.recon_size;
      std::vector<double> c(nr, 0.0);
      for (std::size_t x = 0; x < nx; ++x) {
        const double* a = &b.kernel[x * nr];
        double z = 0.0;
        for (std::size_t r = 0; r < nr; ++r) z += b.q[r] * a[r];
        const double w = b.p[x] / z;
        for (std::size_t r = 0; r < nr; ++r) c[r] += w * a[r];
      }
      double max_log = -std::numeric_limits<double>::infinity();
      double avg_log = 0.0;
      double total = 0.0;
      for (std::size_t r = 0; r < nr; ++r) {
        if (c[r] > 0.0) {
          const double lc = std::log(c[r]);
          max_log = std::max(max_log, lc);
          avg_log += b.q[r] * c[r] * lc;
        }
        b.q[r] *= c[r];
        // A vanishing symbol that still wants to shrink would otherwise decay
        // only like 1/t; one that wants to grow again is brought back.
        if (b.q[r] < kPruneMass && c[r] < 1.0)
          b.q[r] = 0.0;
        else if (b.q[r] == 0.0 && c[r] > 1.0)
          b.q[r] = kPruneMass;
        total += b.q[r];
      }
      for (auto& v : b.q) v /= total;
      worst = std::max(worst, max_log - avg_log);
    }
    return worst;
  }

  // Dual objective phi(s) = E ln Z(x; s) - ln2 sum_i s_i D_i, which is convex
  // in s; its gradient is ln2 (E d - D) and its Hessian ln2^2 E Cov(d | x).
  struct Moments {
    double phi = 0.0;
    std::vector<double> mean;
    std::vector<double> cov;
  };

  Moments moments(std::span<const double> slopes, std::span<const double> targets, bool cov) {
    const std::size_t m = d_.size();
    Moments mo;
    mo.mean.assign(m, 0.0);
    if (cov) mo.cov.assign(m * m, 0.0);
    std::vector<double> e1(m), e2(cov ? m * m : 0);
    for (auto& b : blocks_) {
      fill_kernel(b, slopes);
      const std::size_t nx = b.p.size(), nr = b.recon_size;
      for (std::size_t x = 0; x < nx; ++x) {
        const double* a = &b.kernel[x * nr];
        double z = 0.0;
        for (std::size_t r = 0; r < nr; ++r) z += b.q[r] * a[r];
        std::fill(e1.begin(), e1.end(), 0.0);
        std::fill(e2.begin(), e2.end(), 0.0);
        for (std::size_t r = 0; r < nr; ++r) {
          const double w = b.q[r] * a[r] / z;
          if (w == 0.0) continue;
          for (std::size_t i = 0; i < m; ++i) {
            const double di = b.dist[i][x * nr + r];
            e1[i] += w * di;
            if (cov)
              for (std::size_t j = 0; j <= i; ++j) e2[i * m + j] += w * di * b.dist[j][x * nr + r];
          }
        }
        const double px = b.weight * b.p[x];
        double shift = 0.0;
        for (std::size_t i = 0; i < m; ++i) shift += slopes[i] * b.row_min[i][x];
        mo.phi += px * (std::log(z) + kLn2 * shift);
        for (std::size_t i = 0; i < m; ++i) {
          mo.mean[i] += px * e1[i];
          if (cov)
            for (std::size_t j = 0; j <= i; ++j)
              mo.cov[i * m + j] += px * (e2[i * m + j] - e1[i] * e1[j]);
        }
      }
    }
    for (std::size_t i = 0; i < m; ++i) {
      mo.phi -= kLn2 * slopes[i] * targets[i];
      if (cov)
        for (std::size_t j = 0; j < i; ++j) mo.cov[j * m + i] = mo.cov[i * m + j];
    }
    return mo;
  }

  // Projected Newton on phi over min_slope <= s_i <= 0 for i in `active`.
  // Returns true when every active target is met or its constraint is slack.
  bool fit_slopes(std::span<const double> targets, const std::vector<std::size_t>& active,
                  std::vector<double>& slopes) {
    const std::size_t m = d_.size();
    const double lo = opts_.min_slope;
    // Aim well inside the tolerance so that the Blahut step that follows
    // cannot push a met target back out; report against the tolerance itself.
    const double aim = 1e-4 * opts_.target_tol;
    auto state_of = [&](const Moments& mo, std::vector<std::size_t>& free) {
      free.clear();
      bool ok = true;
      for (std::size_t i : active) {
        const double g = mo.mean[i] - targets[i];
        if (slopes[i] >= 0.0 && g <= 0.0) continue;  // slack constraint
        if (slopes[i] <= lo && g > 0.0) {             // target out of reach
          ok = ok && g <= opts_.target_tol;
          continue;
        }
        free.push_back(i);
      }
      return ok;
    };
    auto met = [&](const Moments& mo, const std::vector<std::size_t>& free, double tol) {
      return std::all_of(free.begin(), free.end(), [&](std::size_t i) {
        return std::fabs(mo.mean[i] - targets[i]) <= tol;
      });
    };

    Moments mo = moments(slopes, targets, false);
    std::vector<std::size_t> free;
    bool reachable = state_of(mo, free);
    for (int step = 0; step < 100 && !met(mo, free, aim); ++step) {
      mo = moments(slopes, targets, true);
      const std::size_t n = free.size();
      // Newton direction on the free coordinates: Cov * dir = -(E d - D) / ln2.
      std::vector<double> h(n * n), dir(n);
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) h[a * n + b] = kLn2 * mo.cov[free[a] * m + free[b]];
        h[a * n + a] += 1e-13;
        dir[a] = -(mo.mean[free[a]] - targets[free[a]]);
      }
      solve_symmetric(h, dir, n);

      double t = 1.0;
      std::vector<double> trial = slopes;
      Moments next;
      bool accepted = false;
      for (int half = 0; half < 60; ++half, t *= 0.5) {
        double slope_change = 0.0;
        for (std::size_t a = 0; a < n; ++a) {
          const std::size_t i = free[a];
          trial[i] = std::clamp(slopes[i] + t * dir[a], lo, 0.0);
          slope_change += kLn2 * (mo.mean[i] - targets[i]) * (trial[i] - slopes[i]);
        }
        next = moments(trial, targets, false);
        if (next.phi <= mo.phi + 1e-4 * slope_change + 1e-15 * std::fabs(mo.phi)) {
          accepted = true;
          break;
        }
      }
      if (!accepted) break;
      const bool moved = trial != slopes;
      slopes = trial;
      mo = std::move(next);
      reachable = state_of(mo, free);
      if (!moved) break;
    }
    return reachable && met(mo, free, opts_.target_tol);
  }

  // Gaussian elimination with partial pivoting; small dense systems only.
  static void solve_symmetric(std::vector<double>& h, std::vector<double>& rhs, std::size_t n) {
    for (std::size_t col = 0; col < n; ++col) {
      std::size_t piv = col;
      for (std::size_t r = col + 1; r < n; ++r)
        if (std::fabs(h[r * n + col]) > std::fabs(h[piv * n + col])) piv = r;
      if (piv != col) {
        for (std::size_t k = 0; k < n; ++k) std::swap(h[col * n + k], h[piv * n + k]);
        std::swap(rhs[col], rhs[piv]);
      }
      const double d = h[col * n + col];
      if (d == 0.0) continue;
      for (std::size_t r = col + 1; r < n; ++r) {
        const double f = h[r * n + col] / d;
        for (std::size_t k = col; k < n; ++k) h[r * n + k] -= f * h[col * n + k];
        rhs[r] -= f * rhs[col];
      }
    }
    for (std::size_t col = n; col-- > 0;) {
      double v = rhs[col];
      for (std::size_t k = col + 1; k < n; ++k) v -= h[col * n + k] * rhs[k];
      rhs[col] = h[col * n + col] == 0.0 ? 0.0 : v / h[col * n + col];
    }
  }

  // Rate and distortions of the test channels induced by the current q.
  RdPoint finish(std::span<const double> slopes) {
    RdPoint pt;
    pt.slopes.assign(slopes.begin(), slopes.end());
    pt.distortions.assign(d_.size(), 0.0);
    for (auto& b : blocks_) {
      fill_kernel(b, slopes);
      const std::size_t nx = b.p.size(), nr = b.recon_size;
      std::vector<double> out(nr, 0.0), chan(nx * nr);
      for (std::size_t x = 0; x < nx; ++x) {
        const double* a = &b.kernel[x * nr];
        double s = 0.0;
        for (std::size_t r = 0; r < nr; ++r) s += b.q[r] * a[r];
        for (std::size_t r = 0; r < nr; ++r) {
          chan[x * nr + r] = b.q[r] * a[r] / s;
          out[r] += b.p[x] * chan[x * nr + r];
        }
      }
      double rate = 0.0;
      for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t r = 0; r < nr; ++r) {
          const double qc = chan[x * nr + r];
          if (qc > 0.0 && out[r] > 0.0) rate += b.p[x] * qc * std::log2(qc / out[r]);
          for (std::size_t i = 0; i < d_.size(); ++i)
            pt.distortions[i] += b.weight * b.p[x] * qc * b.dist[i][x * nr + r];
        }
      pt.rate += b.weight * std::max(rate, 0.0);
    }
    return pt;
  }

  void rebuild(Block& b) const {
    std::vector<int> sizes;
    std::uint64_t nr = 1;
    for (const auto& r : b.recon) {
      sizes.push_back(static_cast<int>(r.size()));
      nr *= r.size();
    }
    if (nr * std::max<std::uint64_t>(b.p.size(), 1) > opts_.size_limit)
      throw SizeGuardError("rate-distortion problem of " + std::to_string(b.p.size()) + " x " +
                           std::to_string(nr) + " exceeds size guard " +
                           std::to_string(opts_.size_limit));
    b.recon_size = static_cast<std::size_t>(nr);
    const auto recon_states = decode_states(sizes, b.recon_size);
    b.dist.assign(d_.size(), std::vector<double>(b.p.size() * b.recon_size));
    b.row_min.assign(d_.size(), std::vector<double>(b.p.size()));
    for (std::size_t i = 0; i < d_.size(); ++i)
      for (std::size_t x = 0; x < b.p.size(); ++x) {
        double mn = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < b.recon_size; ++r) {
          const double v = d_[i](static_cast<std::size_t>(b.x_states[x][i]),
                                 static_cast<std::size_t>(b.recon[i][recon_states[r][i]]));
          b.dist[i][x * b.recon_size + r] = v;
          mn = std::min(mn, v);
        }
        b.row_min[i][x] = mn;
      }
    b.q.assign(b.recon_size, 1.0 / static_cast<double>(b.recon_size));
    b.kernel_slopes.clear();
  }

  std::vector<Matrix> d_;
  RdOptions opts_;
  std::vector<Block> blocks_;
};

double minimum_distortion(const RdSource& src, int coord, const Matrix& d) {
  const std::size_t nx = src.source_states();
  const auto states = decode_states(src.cards, nx);
  double total = 0.0;
  for (int y = 0; y < src.side_states; ++y)
    for (std::size_t x = 0; x < nx; ++x) {
      const double p = src.probs[static_cast<std::size_t>(y) * nx + x];
      if (p <= 0.0) continue;
      const auto s = static_cast<std::size_t>(states[x][static_cast<std::size_t>(coord)]);
      double mn = std::numeric_limits<double>::infinity();
      for (std::size_t xh = 0; xh < d.cols; ++xh) mn = std::min(mn, d(s, xh));
      total += p * mn;
    }
  return total;
}

std::vector<double> clamp_slopes(std::span<const double> slopes, const RdOptions& opts) {
  std::vector<double> out;
  for (double s : slopes) {
    if (!(s <= 0.0)) throw InvalidArgument("slopes must be <= 0");
    out.push_back(std::max(s, opts.min_slope));
  }
  return out;
}

void check_options(const RdOptions& opts) {
  if (!(opts.gap_tol_nats > 0.0) || !(opts.target_tol > 0.0) || opts.max_iters < 1 ||
      !(opts.min_slope < 0.0))
    throw InvalidArgument("solver tolerances and iteration limits must be positive");
}

double total_distortion(const RdPoint& p) {
  return std::accumulate(p.distortions.begin(), p.distortions.end(), 0.0);
}

void flag_curve(RdCurve& curve, const RdOptions& opts) {
  std::vector<const RdPoint*> pts;
  for (std::size_t i = 0; i < curve.points.size(); ++i)
    if (curve.errors[i].empty()) pts.push_back(&curve.points[i]);
  std::sort(pts.begin(), pts.end(), [](const RdPoint* a, const RdPoint* b) {
    return total_distortion(*a) < total_distortion(*b);
  });
  const double slack = 2.0 * opts.gap_tol_nats / kLn2 + 1e-12;
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (pts[i]->rate > pts[i - 1]->rate + slack) curve.monotone = false;
  for (std::size_t i = 2; i < pts.size(); ++i) {
    const double d0 = total_distortion(*pts[i - 2]), d1 = total_distortion(*pts[i - 1]),
                 d2 = total_distortion(*pts[i]);
    if (d2 - d0 <= 1e-12) continue;
    const double chord =
        pts[i - 2]->rate + (pts[i]->rate - pts[i - 2]->rate) * (d1 - d0) / (d2 - d0);
    if (pts[i - 1]->rate > chord + slack) curve.convex = false;
  }
}

}  // namespace

Matrix hamming_distortion(int k) {
  Matrix d(static_cast<std::size_t>(k), static_cast<std::size_t>(k), 1.0);
  for (int i = 0; i < k; ++i) d(static_cast<std::size_t>(i), static_cast<std::size_t>(i)) = 0.0;
  return d;
}

Matrix squared_error_distortion(int k) {
  Matrix d(static_cast<std::size_t>(k), static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      d(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = double(i - j) * double(i - j);
  return d;
}

Matrix make_distortion(DistortionKind kind, int k) {
  return kind == DistortionKind::kHamming ? hamming_distortion(k) : squared_error_distortion(k);
}

DistortionKind parse_distortion_kind(std::string_view name) {
  if (name == "hamming") return DistortionKind::kHamming;
  if (name == "squared") return DistortionKind::kSquaredError;
  throw InvalidArgument("unknown distortion '" + std::string(name) +
                        "' (expected hamming or squared)");
}

DistortionSpec DistortionSpec::preset(DistortionKind kind, const BayesNet& net) {
  DistortionSpec spec;
  for (const auto& v : net.variables) spec.per_variable.push_back(make_distortion(kind, v.cardinality));
  return spec;
}

bool valid_distortion(const Matrix& d) {
  return d.data.size() == d.rows * d.cols &&
         std::all_of(d.data.begin(), d.data.end(),
                     [](double v) { return std::isfinite(v) && v >= 0.0; });
}

std::size_t RdSource::source_states() const {
  std::size_t n = 1;
  for (int c : cards) n *= static_cast<std::size_t>(c);
  return n;
}

RdSource RdSource::unconditional(std::span<const double> p) {
  RdSource s;
  s.cards = {static_cast<int>(p.size())};
  s.probs.assign(p.begin(), p.end());
  return s;
}

RdSource RdSource::conditional(const Matrix& joint_yx) {
  RdSource s;
  s.cards = {static_cast<int>(joint_yx.cols)};
  s.side_states = static_cast<int>(joint_yx.rows);
  s.probs = joint_yx.data;
  return s;
}

RdSource RdSource::from_table(const JointTable& table, std::span<const int> xs,
                              std::span<const int> side) {
  std::vector<int> vars(side.begin(), side.end());
  vars.insert(vars.end(), xs.begin(), xs.end());
  const JointTable m = marginalize(table, vars);
  RdSource s;
  for (std::size_t i = 0; i < side.size(); ++i) s.side_states *= m.cards[i];
  s.cards.assign(m.cards.begin() + static_cast<std::ptrdiff_t>(side.size()), m.cards.end());
  s.probs = m.probs;
  return s;
}

double trivial_distortion(const RdSource& src, int coord, const Matrix& d) {
  const std::size_t nx = src.source_states();
  const auto states = decode_states(src.cards, nx);
  double total = 0.0;
  for (int y = 0; y < src.side_states; ++y) {
    std::vector<double> cost(d.cols, 0.0);
    for (std::size_t x = 0; x < nx; ++x) {
      const double p = src.probs[static_cast<std::size_t>(y) * nx + x];
      if (p <= 0.0) continue;
      const auto s = static_cast<std::size_t>(states[x][static_cast<std::size_t>(coord)]);
      for (std::size_t xh = 0; xh < d.cols; ++xh) cost[xh] += p * d(s, xh);
    }
    total += *std::min_element(cost.begin(), cost.end());
  }
  return total;
}

RdPoint ba_joint_multi(const RdSource& src, std::span<const Matrix> d,
                       std::span<const double> slopes, const RdOptions& opts) {
  check_options(opts);
  check_source(src, d);
  if (slopes.size() != d.size()) throw InvalidArgument("need one slope per coordinate");
  const auto s = clamp_slopes(slopes, opts);
  MultiSolver solver(src, d, opts);
  return solver.solve(s);
}

RdPoint ba_joint_multi_target(const RdSource& src, std::span<const Matrix> d,
                              std::span<const double> targets, const RdOptions& opts) {
  check_options(opts);
  check_source(src, d);
  const std::size_t m = d.size();
  if (targets.size() != m) throw InvalidArgument("need one target per coordinate");

  MultiSolver solver(src, d, opts);
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < m; ++i) {
    if (!(targets[i] >= 0.0)) throw InvalidArgument("distortion targets must be >= 0");
    const double dmin = minimum_distortion(src, static_cast<int>(i), d[i]);
    if (targets[i] < dmin - opts.target_tol)
      throw InvalidArgument("target " + std::to_string(targets[i]) +
                            " is below the minimum achievable distortion " + std::to_string(dmin));
    if (targets[i] >= trivial_distortion(src, static_cast<int>(i), d[i]) - 1e-12)
      solver.restrict_trivial(i);
    else
      active.push_back(i);
  }

  std::vector<double> slopes(m, 0.0);
  for (std::size_t i : active) slopes[i] = -1.0;
  if (active.empty()) return solver.solve(slopes);
  return solver.solve_targets(targets, active, slopes);
}

RdPoint ba_point(std::span<const double> source, const Matrix& d, double slope,
                 const RdOptions& opts) {
  const Matrix ds[1] = {d};
  const double s[1] = {slope};
  return ba_joint_multi(RdSource::unconditional(source), ds, s, opts);
}

RdPoint ba_target(std::span<const double> source, const Matrix& d, double target,
                  const RdOptions& opts) {
  const Matrix ds[1] = {d};
  const double t[1] = {target};
  return ba_joint_multi_target(RdSource::unconditional(source), ds, t, opts);
}

RdPoint ba_conditional(const Matrix& joint_yx, const Matrix& d, double slope,
                       const RdOptions& opts) {
  const Matrix ds[1] = {d};
  const double s[1] = {slope};
  return ba_joint_multi(RdSource::conditional(joint_yx), ds, s, opts);
}

RdPoint ba_conditional_target(const Matrix& joint_yx, const Matrix& d, double target,
                              const RdOptions& opts) {
  const Matrix ds[1] = {d};
  const double t[1] = {target};
  return ba_joint_multi_target(RdSource::conditional(joint_yx), ds, t, opts);
}

RdCurve rd_curve(const RdSource& src, std::span<const Matrix> d, std::span<const double> slopes,
                 const RdOptions& opts) {
  check_options(opts);
  check_source(src, d);
  if (slopes.empty()) throw InvalidArgument("slope grid is empty");
  RdCurve curve;
  MultiSolver solver(src, d, opts);
  for (double s : slopes) {
    try {
      const std::vector<double> one(d.size(), s);
      curve.points.push_back(solver.solve(clamp_slopes(one, opts)));
      curve.errors.emplace_back();
    } catch (const std::exception& e) {
      curve.points.emplace_back();
      curve.points.back().converged = false;
      curve.errors.emplace_back(e.what());
    }
  }
  flag_curve(curve, opts);
  return curve;
}

RdCurve rd_curve_targets(const RdSource& src, std::span<const Matrix> d,
                         std::span<const double> targets, const RdOptions& opts) {
  if (targets.empty()) throw InvalidArgument("target grid is empty");
  RdCurve curve;
  for (double t : targets) {
    try {
      const std::vector<double> all(d.size(), t);
      curve.points.push_back(ba_joint_multi_target(src, d, all, opts));
      curve.errors.emplace_back();
    } catch (const SizeGuardError&) {
      throw;
    } catch (const std::exception& e) {
      curve.points.emplace_back();
      curve.points.back().converged = false;
      curve.errors.emplace_back(e.what());
    }
  }
  flag_curve(curve, opts);
  return curve;
}

double binary_conditional_rd(double p, double distortion) {
  if (!(p >= 0.0 && p <= 0.5)) throw InvalidArgument("crossover p must lie in [0, 0.5]");
  if (!(distortion >= 0.0)) throw InvalidArgument("distortion must be >= 0");
  if (distortion >= p) return 0.0;
  return binary_entropy(p) - binary_entropy(distortion);
}

double gaussian_conditional_rd(double sigma, double r, double distortion) {
  if (!(sigma > 0.0)) throw InvalidArgument("sigma must be > 0");
  if (!(std::fabs(r) <= 1.0)) throw InvalidArgument("correlation must lie in [-1, 1]");
  if (!(distortion > 0.0)) throw InvalidArgument("distortion must be > 0 (rate diverges at 0)");
  const double variance = sigma * sigma * (1.0 - r * r);
  if (distortion >= variance) return 0.0;
  return 0.5 * std::log2(variance / distortion);
}

}  // namespace semrd
