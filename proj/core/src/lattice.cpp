#include "volterra/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "volterra/parallel.hpp"

namespace volterra {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrapAngle(double t) {
  t = std::fmod(t, kTwoPi);
  return t < 0.0 ? t + kTwoPi : t;
}

// Points of the disc bucketed by hyperbolic radius, sorted by angle inside a bucket.
class PolarIndex {
 public:
  explicit PolarIndex(double width) : width_(width) {}

  void insert(const CVec& z, std::size_t idx) {
    const std::size_t b = bucketOf(std::atanh(z.norm()));
    if (b >= buckets_.size()) buckets_.resize(b + 1);
    Entry e{wrapAngle(std::arg(z[0])), z.norm(), idx, z};
    auto& v = buckets_[b];
    v.insert(std::upper_bound(v.begin(), v.end(), e, [](const Entry& a, const Entry& c) { return a.theta < c.theta; }),
             e);
  }

  // Calls f(idx, distance) for every stored point within Bergman distance < radius of z.
  template <class F>
  void visit(const CVec& z, double radius, F&& f) const {
    const double rz = z.norm();
    const double Rz = std::atanh(rz);
    const double t = std::tanh(radius);
    // |z - w| <= t (1 - |z|^2) / (1 - t |z|) whenever the pseudo-hyperbolic distance is below t.
    const double euclid = t * (1.0 - rz * rz) / (1.0 - t * rz);
    const double thz = wrapAngle(std::arg(z[0]));
    const long lo = std::max(0L, static_cast<long>(std::floor((Rz - radius) / width_)));
    const long hi = static_cast<long>(std::floor((Rz + radius) / width_));
    for (long b = lo; b <= hi && b < static_cast<long>(buckets_.size()); ++b) {
      const auto& v = buckets_[static_cast<std::size_t>(b)];
      if (v.empty()) continue;
      const double rwMin = std::tanh(b * width_);
      const double sinHalf = (rz < 1e-9 || rwMin < 1e-9) ? 2.0 : euclid / (2.0 * std::sqrt(rz * rwMin));
      auto check = [&](const Entry& e) {
        const double d = bergmanDistanceRaw(z, e.z);
        if (d < radius) f(e.idx, d);
      };
      if (sinHalf >= 1.0) {
        for (const auto& e : v) check(e);
        continue;
      }
      const double delta = 2.0 * std::asin(sinHalf);
      scanWindow(v, thz - delta, thz + delta, check);
    }
  }

 private:
  struct Entry {
    double theta;
    double rho;
    std::size_t idx;
    CVec z;
  };

  std::size_t bucketOf(double R) const { return static_cast<std::size_t>(std::floor(R / width_)); }

  template <class G>
  static void scanWindow(const std::vector<Entry>& v, double a, double b, G&& g) {
    auto scan = [&](double x, double y) {
      auto it = std::lower_bound(v.begin(), v.end(), x, [](const Entry& e, double val) { return e.theta < val; });
      for (; it != v.end() && it->theta <= y; ++it) g(*it);
    };
    if (a < 0.0) {
      scan(0.0, b);
      scan(a + kTwoPi, kTwoPi);
    } else if (b > kTwoPi) {
      scan(a, kTwoPi);
      scan(0.0, b - kTwoPi);
    } else {
      scan(a, b);
    }
  }

  double width_;
  std::vector<std::vector<Entry>> buckets_;
};

int packingBound(double r) {
  const double outer = std::sinh(4.25 * r);
  const double inner = std::sinh(0.25 * r);
  return static_cast<int>(std::floor(outer * outer / (inner * inner)));
}

void requireOneDim(int n) {
  if (n != 1) throw DomainError("lattice tooling is implemented for n = 1");
}

// The circle cut at every shadow-arc endpoint. Each segment lies inside or
// outside every shadow I(a_k), so A(xi) is constant on it. Arcs are stored as
// segment index ranges; per-segment aggregates come from a sweep.
class ShadowPartition {
 public:
  ShadowPartition(const Lattice& Z, double gamma) {
    requireOneDim(Z.n);
    arcs_.reserve(Z.size());
    std::vector<double> cuts{0.0, kTwoPi};
    for (const auto& a : Z.points) {
      const Arc arc = koranyiShadowArc(a.coords()[0], gamma);
      arcs_.push_back(arc);
      if (!arc.empty() && !arc.full()) {
        cuts.push_back(wrapAngle(arc.center - arc.halfWidth));
        cuts.push_back(wrapAngle(arc.center + arc.halfWidth));
      }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    cuts_ = std::move(cuts);
    for (std::size_t k = 0; k < arcs_.size(); ++k) {
      const Arc& arc = arcs_[k];
      if (arc.empty()) continue;
      if (arc.full()) {
        ranges_.push_back({k, 0, segments()});
        continue;
      }
      const double s = wrapAngle(arc.center - arc.halfWidth);
      const double e = s + 2.0 * arc.halfWidth;
      addRange(k, s, std::min(e, kTwoPi));
      if (e > kTwoPi) addRange(k, 0.0, e - kTwoPi);
    }
  }

  std::size_t segments() const noexcept { return cuts_.size() - 1; }
  double length(std::size_t i) const { return cuts_[i + 1] - cuts_[i]; }
  const Arc& arc(std::size_t k) const { return arcs_[k]; }

  // sum of v_k over the arcs covering each segment.
  std::vector<double> sums(const std::vector<double>& v) const {
    std::vector<long double> diff(segments() + 1, 0.0L);
    for (const auto& r : ranges_) {
      diff[r.first] += v[r.arc];
      diff[r.last] -= v[r.arc];
    }
    std::vector<double> out(segments());
    long double run = 0.0L;
    for (std::size_t i = 0; i < segments(); ++i) {
      run += diff[i];
      out[i] = std::max(0.0, static_cast<double>(run));
    }
    return out;
  }

  // max of v_k over the arcs covering each segment (0 where none does).
  std::vector<double> maxes(const std::vector<double>& v) const {
    std::vector<std::vector<std::size_t>> opens(segments() + 1), closes(segments() + 1);
    for (std::size_t j = 0; j < ranges_.size(); ++j) {
      opens[ranges_[j].first].push_back(j);
      closes[ranges_[j].last].push_back(j);
    }
    std::multiset<double> active;
    std::vector<double> out(segments());
    for (std::size_t i = 0; i < segments(); ++i) {
      for (std::size_t j : closes[i]) active.erase(active.find(v[ranges_[j].arc]));
      for (std::size_t j : opens[i]) active.insert(v[ranges_[j].arc]);
      out[i] = active.empty() ? 0.0 : *active.rbegin();
    }
    return out;
  }

  // Integral over the arc of a function constant on segments (values per segment).
  double arcIntegral(const Arc& arc, const std::vector<double>& prefix, const std::vector<double>& vals) const {
    if (arc.full()) return prefix.back();
    const double s = wrapAngle(arc.center - arc.halfWidth);
    const double e = s + 2.0 * arc.halfWidth;
    if (e <= kTwoPi) return primitive(e, prefix, vals) - primitive(s, prefix, vals);
    return prefix.back() - primitive(s, prefix, vals) + primitive(e - kTwoPi, prefix, vals);
  }

  std::vector<double> prefixOf(const std::vector<double>& vals) const {
    std::vector<double> p(segments() + 1, 0.0);
    for (std::size_t i = 0; i < segments(); ++i) p[i + 1] = p[i] + vals[i] * length(i);
    return p;
  }

 private:
  struct Range {
    std::size_t arc, first, last;
  };

  void addRange(std::size_t k, double a, double b) {
    const auto first = static_cast<std::size_t>(std::lower_bound(cuts_.begin(), cuts_.end(), a) - cuts_.begin());
    const auto last = static_cast<std::size_t>(std::lower_bound(cuts_.begin(), cuts_.end(), b) - cuts_.begin());
    if (last > first) ranges_.push_back({k, first, std::min(last, segments())});
  }

  double primitive(double x, const std::vector<double>& prefix, const std::vector<double>& vals) const {
    auto it = std::upper_bound(cuts_.begin(), cuts_.end(), x);
    std::size_t i = it == cuts_.begin() ? 0 : static_cast<std::size_t>(it - cuts_.begin()) - 1;
    if (i >= segments()) return prefix.back();
    return prefix[i] + vals[i] * (x - cuts_[i]);
  }

  std::vector<Arc> arcs_;
  std::vector<double> cuts_;
  std::vector<Range> ranges_;
};

void requireAligned(const TentSequence& s, const Lattice& Z) {
  if (s.size() != Z.size()) throw ParameterError("sequence length differs from the lattice size");
}

// sup over u of (1 - |u|^2)^{-n} sum_{a_k in Q(u)} m_k. For a fixed direction the
// supremum over delta = 1 - |u|^2 sits just above one of the distances |1 - <a_k, zeta>|.
double boxSupremum(const Lattice& Z, const std::vector<double>& masses) {
  const int n = Z.n;
  double total = 0.0;
  for (double m : masses) total += m;
  if (total == 0.0) return 0.0;
  std::vector<SpherePoint> dirs;
  for (int k = 0; k < 256; ++k) dirs.push_back(SpherePoint::fromAngle(kTwoPi * k / 256.0));
  for (std::size_t k = 0; k < Z.size(); ++k) {
    if (masses[k] > 0.0 && Z.points[k].norm() > 0.0) dirs.push_back(SpherePoint::normalized(Z.points[k].coords()));
  }
  std::vector<double> best(dirs.size(), 0.0);
  parallelFor(dirs.size(), [&](std::size_t i) {
    std::vector<std::pair<double, double>> rm;
    for (std::size_t k = 0; k < Z.size(); ++k) {
      if (masses[k] > 0.0) rm.emplace_back(std::abs(1.0 - inner(Z.points[k].coords(), dirs[i].coords())), masses[k]);
    }
    std::sort(rm.begin(), rm.end());
    double cum = 0.0, b = 0.0;
    for (std::size_t j = 0; j < rm.size() && rm[j].first < 1.0; ++j) {
      cum += rm[j].second;
      if (j + 1 < rm.size() && rm[j + 1].first == rm[j].first) continue;
      b = std::max(b, cum / std::pow(rm[j].first, n));
    }
    best[i] = b;
  });
  return std::max(total, *std::max_element(best.begin(), best.end()));
}

}  // namespace

std::vector<CVec> latticeTestGrid(const Lattice& Z) {
  std::vector<CVec> pts;
  const double h = Z.r / 3.0;
  const double Rmax = std::atanh(Z.rmax);
  std::vector<double> radii;
  for (double R = 0.5 * h; R < Rmax; R += h) radii.push_back(R);
  radii.push_back(Rmax);
  pts.push_back(CVec::zero(1));
  for (double R : radii) {
    const int m = std::max(8, static_cast<int>(std::ceil(kPi * std::sinh(2.0 * R) / h)));
    const double rho = std::tanh(R);
    for (int i = 0; i < m; ++i) pts.emplace_back(std::polar(rho, kTwoPi * (i + 0.37) / m));
  }
  return pts;
}

LatticeCertificate verifyLattice(const Lattice& Z, const std::vector<CVec>& testPoints) {
  requireOneDim(Z.n);
  const double r = Z.r;
  LatticeCertificate c;
  c.multiplicityBound = packingBound(r);
  c.testPoints = testPoints.size();
  PolarIndex index(0.5 * r);
  for (std::size_t k = 0; k < Z.size(); ++k) index.insert(Z.points[k].coords(), k);

  std::vector<double> nearest(Z.size(), 2.0 * r);
  parallelFor(Z.size(), [&](std::size_t k) {
    index.visit(Z.points[k].coords(), 2.0 * r, [&](std::size_t j, double d) {
      if (j != k) nearest[k] = std::min(nearest[k], d);
    });
  });
  c.minPairwiseBergmanDist = Z.size() < 2 ? 2.0 * r : *std::min_element(nearest.begin(), nearest.end());

  std::vector<double> cover(testPoints.size(), 0.0);
  std::vector<int> mult(testPoints.size(), 0);
  parallelFor(testPoints.size(), [&](std::size_t i) {
    const CVec& z = testPoints[i];
    if (!(z.norm() <= Z.rmax * (1.0 + 1e-12))) return;
    double best = kInfinity;
    int count = 0;
    index.visit(z, 4.0 * r, [&](std::size_t, double d) {
      best = std::min(best, d);
      ++count;
    });
    cover[i] = best;
    mult[i] = count;
  });
  c.coveringRadius = testPoints.empty() ? 0.0 : *std::max_element(cover.begin(), cover.end());
  c.coveringVerified = c.coveringRadius < r;
  c.observedMultiplicity = mult.empty() ? 0 : *std::max_element(mult.begin(), mult.end());
  // D(a_k, r/4) are disjoint exactly when distinct points are at least r/2 apart.
  c.separationVerified = c.minPairwiseBergmanDist >= 0.5 * r;
  return c;
}

Lattice buildLattice(double r, double rmax, int n, std::size_t maxPoints) {
  if (!(r > 0.0 && r <= 0.5)) throw ParameterError("lattice parameter r must lie in (0, 0.5]");
  if (!(rmax > 0.9 && rmax < 1.0)) throw ParameterError("rmax must lie in (0.9, 1)");
  requireOneDim(n);
  Lattice Z;
  Z.r = r;
  Z.rmax = rmax;
  Z.n = n;
  // Candidates on hyperbolic shells with spacing h in both directions lie within
  // about 0.71 h of any point; rejected candidates are within r/2 of an accepted one.
  // Visiting them in a seeded random order keeps the packing density the same at
  // every depth; a shell-by-shell sweep lets it drift with the shell phases.
  const double h = 0.4 * r;
  const double Rmax = std::atanh(rmax) + h;
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  std::vector<CVec> cand;
  for (int j = 0; j * h <= Rmax; ++j) {
    const double R = j * h;
    const double rho = std::tanh(R);
    const int m = j == 0 ? 1 : std::max(3, static_cast<int>(std::ceil(kPi * std::sinh(2.0 * R) / h)));
    if (cand.size() + static_cast<std::size_t>(m) > 8 * maxPoints) {
      std::ostringstream os;
      os << "lattice needs more than " << maxPoints << " points";
      throw BudgetError(os.str());
    }
    for (int i = 0; i < m; ++i) {
      cand.push_back(j == 0 ? CVec::zero(1) : CVec(std::polar(rho, wrapAngle(kTwoPi * i / m + golden * j))));
    }
  }
  std::mt19937_64 rng(0x5eed);
  std::shuffle(cand.begin(), cand.end(), rng);
  PolarIndex index(h);
  std::vector<CVec> accepted;
  for (const CVec& z : cand) {
    bool separated = true;
    index.visit(z, 0.5 * r, [&](std::size_t, double) { separated = false; });
    if (!separated) continue;
    if (accepted.size() >= maxPoints) {
      std::ostringstream os;
      os << "lattice needs more than " << maxPoints << " points";
      throw BudgetError(os.str());
    }
    index.insert(z, accepted.size());
    accepted.push_back(z);
  }
  // Innermost first, so prefixes are the points of a disc.
  std::sort(accepted.begin(), accepted.end(), [](const CVec& a, const CVec& b) {
    const double ra = a.norm(), rb = b.norm();
    if (ra != rb) return ra < rb;
    return wrapAngle(std::arg(a[0])) < wrapAngle(std::arg(b[0]));
  });
  for (const auto& z : accepted) Z.points.emplace_back(z);
  Z.certificate = verifyLattice(Z, latticeTestGrid(Z));
  return Z;
}

Lattice latticePrefix(const Lattice& Z, std::size_t count) {
  if (count == 0 || count > Z.size()) throw ParameterError("prefix length must lie in [1, lattice size]");
  Lattice out;
  out.r = Z.r;
  out.n = Z.n;
  out.points.assign(Z.points.begin(), Z.points.begin() + static_cast<std::ptrdiff_t>(count));
  double rmax = 0.0;
  for (const auto& a : out.points) rmax = std::max(rmax, a.norm());
  out.rmax = rmax;
  out.certificate = verifyLattice(out, latticeTestGrid(out));
  return out;
}

double tentSeqNorm(const TentSequence& lambda, const Lattice& Z, double p, double q, const SpaceParams& params) {
  requireAligned(lambda, Z);
  if (!(p > 0.0) || !(q > 0.0)) throw ParameterError("tent exponents must be positive");
  if (std::isinf(p) && std::isinf(q)) throw ParameterError("at most one tent exponent may be infinite");
  requireOneDim(Z.n);
  if (std::isinf(p)) {
    std::vector<double> masses(Z.size());
    for (std::size_t k = 0; k < Z.size(); ++k) {
      masses[k] = std::pow(std::abs(lambda[k]), q) * std::pow(1.0 - Z.points[k].coords().normSq(), Z.n);
    }
    return std::pow(boxSupremum(Z, masses), 1.0 / q);
  }
  const ShadowPartition part(Z, params.aperture.value());
  std::vector<double> v(Z.size());
  for (std::size_t k = 0; k < Z.size(); ++k) {
    v[k] = std::isinf(q) ? std::abs(lambda[k]) : std::pow(std::abs(lambda[k]), q);
  }
  const auto agg = std::isinf(q) ? part.maxes(v) : part.sums(v);
  double sum = 0.0;
  for (std::size_t i = 0; i < part.segments(); ++i) {
    if (agg[i] > 0.0) sum += part.length(i) / kTwoPi * std::pow(agg[i], std::isinf(q) ? p : p / q);
  }
  return std::pow(sum, 1.0 / p);
}

cplx dualPairing(const TentSequence& lambda, const TentSequence& mu, const Lattice& Z) {
  requireAligned(lambda, Z);
  requireAligned(mu, Z);
  cplx s = 0.0;
  for (std::size_t k = 0; k < Z.size(); ++k) {
    s += lambda[k] * std::conj(mu[k]) * std::pow(1.0 - Z.points[k].coords().normSq(), Z.n);
  }
  return s;
}

Factorization factorizeTentSeq(const TentSequence& lambda, const Lattice& Z, double p, double q, double s,
                               const SpaceParams& params) {
  requireAligned(lambda, Z);
  if (!(q > 0.0) || std::isinf(q)) throw ParameterError("q must be positive and finite");
  if (!(s > 0.0 && s < p) || std::isinf(p)) throw ParameterError("factorization needs 0 < s < p < infinity");
  if (std::all_of(lambda.begin(), lambda.end(), [](cplx v) { return v == 0.0; })) {
    throw ParameterError("cannot factor the zero sequence");
  }
  const ShadowPartition part(Z, params.aperture.value());
  std::vector<double> v(Z.size());
  for (std::size_t k = 0; k < Z.size(); ++k) v[k] = std::pow(std::abs(lambda[k]), q);
  std::vector<double> powA = part.sums(v);
  for (double& a : powA) a = std::pow(a, s / q);
  const auto prefix = part.prefixOf(powA);
  Factorization f;
  f.alpha.resize(Z.size());
  f.beta.resize(Z.size());
  for (std::size_t k = 0; k < Z.size(); ++k) {
    const Arc& arc = part.arc(k);
    // A point outside every approach region has an empty shadow; average over the whole circle.
    const double avg = (arc.empty() || arc.full()) ? prefix.back() / kTwoPi
                                                   : part.arcIntegral(arc, prefix, powA) / (2.0 * arc.halfWidth);
    const double a = std::pow(avg, 1.0 / s);
    f.alpha[k] = a;
    if (lambda[k] == 0.0) {
      f.beta[k] = 0.0;
      continue;
    }
    if (!(a > 1e-300) || !std::isfinite(a)) {
      std::ostringstream os;
      os << "alpha underflows at index " << k;
      throw NonFiniteError(os.str());
    }
    f.beta[k] = lambda[k] / a;
    f.maxReconstructionError = std::max(f.maxReconstructionError, std::abs(f.alpha[k] * f.beta[k] - lambda[k]));
  }
  f.lambdaNorm = tentSeqNorm(lambda, Z, p, q, params);
  f.alphaNorm = tentSeqNorm(f.alpha, Z, p, kInfinity, params);
  f.betaNorm = tentSeqNorm(f.beta, Z, kInfinity, q, params);
  f.ratio = f.alphaNorm * f.betaNorm / f.lambdaNorm;
  return f;
}

SequenceCarleson carlesonOfSequence(const TentSequence& beta, const Lattice& Z, double q, const SpaceParams& params,
                                    const QuadratureConfig& cfg) {
  requireAligned(beta, Z);
  if (!(q > 0.0)) throw ParameterError("q must be positive");
  std::vector<BallPoint> pts;
  std::vector<double> masses;
  for (std::size_t k = 0; k < Z.size(); ++k) {
    const double m = std::pow(std::abs(beta[k]), q) * std::pow(1.0 - Z.points[k].coords().normSq(), Z.n);
    if (m > 0.0) {
      pts.push_back(Z.points[k]);
      masses.push_back(m);
    }
  }
  SequenceCarleson out;
  const MeasureSpec mu = pts.empty() ? MeasureSpec::zero(Z.n) : MeasureSpec::atomic(pts, masses);
  out.report = carlesonReport(mu, 1.0, cfg);
  out.tentNorm = tentSeqNorm(beta, Z, kInfinity, q, params);
  const double c = std::pow(out.report.sConstantKernel, 1.0 / q);
  out.tentToCarlesonRatio = c > 0.0 ? out.tentNorm / c : 0.0;
  return out;
}

}  // namespace volterra
