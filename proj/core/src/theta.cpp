#include "tanglab/theta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "tanglab/types.hpp"

namespace tanglab {

namespace {

double seq_value(std::size_t k) { return 0.5 + 1.0 / static_cast<double>(k + 1); }

// Largest k >= 1 with seq_value(k) >= v (v > 1/2); 0 if none.
std::size_t seq_last_at_least(double v) {
  if (v <= 0.5) return std::numeric_limits<std::size_t>::max();
  const double q = 1.0 / (v - 0.5);
  if (q > 1e15) return std::numeric_limits<std::size_t>::max();
  std::size_t k = static_cast<std::size_t>(std::floor(q)) + 1;
  while (k >= 1 && seq_value(k) < v) --k;
  return k;
}

// Smallest k >= 1 with seq_value(k) <= v.
std::size_t seq_first_at_most(double v) {
  if (v >= 1.0) return 1;
  if (v <= 0.5) return std::numeric_limits<std::size_t>::max();
  std::size_t k = static_cast<std::size_t>(std::ceil(1.0 / (v - 0.5))) - 1;
  if (k < 1) k = 1;
  while (k > 1 && seq_value(k - 1) <= v) --k;
  while (seq_value(k) > v) ++k;
  return k;
}

CoverResult greedy_cover(const std::vector<double>& pts, double delta) {
  CoverResult c;
  c.delta = delta;
  std::size_t i = 0;
  while (i < pts.size()) {
    const double start = pts[i];
    c.centers.push_back(start + delta / 2);
    while (i < pts.size() && pts[i] <= start + delta) ++i;
  }
  c.N = c.centers.size();
  return c;
}

}  // namespace

ThetaSet ThetaSet::finite(std::vector<double> points) {
  if (points.empty()) throw ConfigError("finite parameter set needs at least one point");
  for (double p : points)
    if (!std::isfinite(p)) throw InputError("non-finite parameter point");
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  ThetaSet t;
  t.kind_ = ThetaKind::finite;
  t.points_ = std::move(points);
  t.a_ = t.points_.front();
  t.b_ = t.points_.back();
  return t;
}

ThetaSet ThetaSet::interval(double a, double b) {
  if (!(a <= b) || !std::isfinite(a) || !std::isfinite(b)) throw ConfigError("interval needs finite a <= b");
  ThetaSet t;
  t.kind_ = ThetaKind::interval;
  t.a_ = a;
  t.b_ = b;
  return t;
}

ThetaSet ThetaSet::sequence() {
  ThetaSet t;
  t.kind_ = ThetaKind::sequence;
  t.a_ = 0.5;
  t.b_ = 1.0;
  return t;
}

ThetaSet ThetaSet::custom(CoverFn cover, double lo, double hi) {
  if (!cover) throw ConfigError("custom parameter set needs a cover callback");
  ThetaSet t;
  t.kind_ = ThetaKind::custom;
  t.cover_ = std::move(cover);
  t.a_ = lo;
  t.b_ = hi;
  return t;
}

bool ThetaSet::empty() const {
  switch (kind_) {
    case ThetaKind::finite:
      return points_.empty();
    case ThetaKind::interval:
    case ThetaKind::custom:
      return a_ > b_;
    case ThetaKind::sequence:
      if (a_ > b_) return true;
      if (a_ <= 0.5 && b_ >= 0.5) return false;
      if (b_ < 0.5) return true;
      return seq_last_at_least(a_) < seq_first_at_most(b_) || seq_last_at_least(a_) == 0;
  }
  return true;
}

double ThetaSet::lo() const {
  switch (kind_) {
    case ThetaKind::finite:
      return points_.front();
    case ThetaKind::sequence:
      if (a_ <= 0.5) return 0.5;
      return seq_value(seq_last_at_least(a_));
    default:
      return a_;
  }
}

double ThetaSet::hi() const {
  switch (kind_) {
    case ThetaKind::finite:
      return points_.back();
    case ThetaKind::sequence: {
      const std::size_t k = seq_first_at_most(b_);
      if (k == std::numeric_limits<std::size_t>::max()) return 0.5;
      const double v = seq_value(k);
      return v >= a_ ? v : 0.5;
    }
    default:
      return b_;
  }
}

bool ThetaSet::contains(double theta) const {
  switch (kind_) {
    case ThetaKind::finite:
      return std::binary_search(points_.begin(), points_.end(), theta);
    case ThetaKind::interval:
    case ThetaKind::custom:
      return theta >= a_ && theta <= b_;
    case ThetaKind::sequence: {
      if (theta < a_ || theta > b_) return false;
      if (theta == 0.5) return true;
      if (theta < 0.5 || theta > 1.0) return false;
      const double q = 1.0 / (theta - 0.5);
      const double k1 = std::round(q);
      if (k1 < 2) return false;
      return std::abs(seq_value(static_cast<std::size_t>(k1) - 1) - theta) <= 1e-15;
    }
  }
  return false;
}

ThetaSet ThetaSet::clip(double a, double b) const {
  ThetaSet t = *this;
  switch (kind_) {
    case ThetaKind::finite: {
      std::vector<double> kept;
      for (double p : points_)
        if (p >= a && p <= b) kept.push_back(p);
      t.points_ = std::move(kept);
      t.a_ = std::max(a_, a);
      t.b_ = std::min(b_, b);
      break;
    }
    case ThetaKind::custom: {
      const double lo = std::max(a_, a), hi = std::min(b_, b);
      auto parent = cover_;
      t.cover_ = [parent, lo, hi](double delta) {
        CoverResult c = parent(delta);
        CoverResult out;
        out.delta = delta;
        for (double x : c.centers)
          if (x + delta / 2 >= lo && x - delta / 2 <= hi) out.centers.push_back(x);
        out.N = out.centers.size();
        return out;
      };
      t.a_ = lo;
      t.b_ = hi;
      break;
    }
    default:
      t.a_ = std::max(a_, a);
      t.b_ = std::min(b_, b);
  }
  return t;
}

std::vector<double> ThetaSet::sweep_points(double resolution) const {
  std::vector<double> pts;
  if (empty()) return pts;
  switch (kind_) {
    case ThetaKind::finite:
      return points_;
    case ThetaKind::interval:
      pts.push_back(a_);
      return pts;
    case ThetaKind::custom: {
      const CoverResult c = cover_(resolution);
      for (double x : c.centers) pts.push_back(std::clamp(x, a_, b_));
      std::sort(pts.begin(), pts.end());
      return pts;
    }
    case ThetaKind::sequence: {
      const double left = lo();
      pts.push_back(left);
      // members strictly above left + resolution, in increasing order
      const std::size_t kmax = seq_last_at_least(std::nextafter(left + resolution, 2.0));
      const std::size_t kmin = seq_first_at_most(b_);
      if (kmax == std::numeric_limits<std::size_t>::max() || kmax == 0) return pts;
      for (std::size_t k = kmax; k >= kmin && k >= 1; --k) {
        const double v = seq_value(k);
        if (v > left + resolution && v <= b_ && v >= a_) pts.push_back(v);
        if (k == 1) break;
      }
      std::sort(pts.begin(), pts.end());
      pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
      return pts;
    }
  }
  return pts;
}

std::vector<double> ThetaSet::generator_points(std::size_t count) const {
  std::vector<double> out;
  if (kind_ != ThetaKind::sequence) return out;
  for (std::size_t k = 1; k <= count; ++k) {
    const double v = seq_value(k);
    if (v >= a_ && v <= b_) out.push_back(v);
  }
  return out;
}

std::vector<double> ThetaSet::sample(std::size_t n, std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<double> out;
  out.reserve(n);
  if (empty()) return out;
  switch (kind_) {
    case ThetaKind::finite:
      for (std::size_t i = 0; i < n; ++i) out.push_back(points_[rng() % points_.size()]);
      break;
    case ThetaKind::interval:
      for (std::size_t i = 0; i < n; ++i) out.push_back(a_ + (b_ - a_) * U(rng));
      break;
    case ThetaKind::custom: {
      const CoverResult c = cover_(std::max(diameter(), 1e-12) / 1024);
      if (c.centers.empty()) return out;
      for (std::size_t i = 0; i < n; ++i)
        out.push_back(std::clamp(c.centers[rng() % c.centers.size()], a_, b_));
      break;
    }
    case ThetaKind::sequence: {
      const std::size_t kmin = seq_first_at_most(b_);
      const std::size_t kmax = a_ > 0.5 ? seq_last_at_least(a_) : std::size_t(1) << 40;
      const bool has_limit = a_ <= 0.5;
      for (std::size_t i = 0; i < n; ++i) {
        if (has_limit && U(rng) < 0.05) {
          out.push_back(0.5);
          continue;
        }
        const double lk = std::log(double(kmin)) + U(rng) * (std::log(double(kmax) + 1) - std::log(double(kmin)));
        std::size_t k = std::clamp<std::size_t>(static_cast<std::size_t>(std::exp(lk)), kmin, kmax);
        out.push_back(seq_value(k));
      }
      break;
    }
  }
  return out;
}

CoverResult box_count(const ThetaSet& theta, double delta) {
  if (!(delta > 0)) throw PreconditionError("box_count needs delta > 0");
  if (theta.empty()) return CoverResult{delta, 0, {}};
  if (theta.diameter() <= delta) return CoverResult{delta, 1, {theta.lo() + delta / 2}};
  switch (theta.kind()) {
    case ThetaKind::interval: {
      const double len = theta.hi() - theta.lo();
      const std::size_t n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(len / delta - 1e-12)));
      CoverResult c;
      c.delta = delta;
      c.N = n;
      for (std::size_t i = 0; i < n; ++i) c.centers.push_back(theta.lo() + (i + 0.5) * delta);
      return c;
    }
    case ThetaKind::custom: {
      CoverResult c = theta.cover_fn()(delta);
      c.delta = delta;
      c.N = c.centers.size();
      return c;
    }
    default:
      return greedy_cover(theta.sweep_points(delta), delta);
  }
}

DimensionFit minkowski_dim(const ThetaSet& theta, int J, int j_lo) {
  if (J < 8) throw PreconditionError("minkowski_dim needs J >= 8");
  if (j_lo < 0 || J - j_lo + 1 < 4) throw PreconditionError("minkowski_dim needs >= 4 scales");
  DimensionFit d;
  d.j_lo = j_lo;
  d.j_hi = J;
  std::vector<double> scales, values;
  bool all_one = true;
  for (int j = j_lo; j <= J; ++j) {
    const double delta = std::ldexp(1.0, -j);
    const CoverResult c = box_count(theta, delta);
    d.deltas.push_back(delta);
    d.counts.push_back(c.N);
    scales.push_back(1.0 / delta);
    values.push_back(static_cast<double>(std::max<std::size_t>(c.N, 1)));
    all_one = all_one && c.N <= 1;
  }
  d.fit = fit_loglog(scales, values);
  if (all_one) {
    d.degenerate = true;
    d.fit.slope = 0.0;
    d.fit.degenerate = true;
  }
  return d;
}

ThetaDecomposition theta_decompose(const ThetaSet& theta, double lambda, double alpha) {
  if (!(lambda > 1)) throw PreconditionError("theta_decompose needs lambda > 1");
  ThetaDecomposition d;
  d.mu = std::min(1.0, 2 * alpha);
  d.diameter = std::pow(lambda, -d.mu);
  const CoverResult c = box_count(theta, d.diameter);
  d.cover_count = c.N;
  for (double x : c.centers) {
    ThetaSet piece = theta.clip(x - d.diameter / 2, x + d.diameter / 2);
    if (!piece.empty()) d.pieces.push_back(std::move(piece));
  }
  return d;
}

}  // namespace tanglab
