#include "lrc/geometry.hpp"

#include <functional>

namespace lrc {

namespace {

const Rational kHalf(1, 2);

void check_speeds(const std::vector<Rational>& z) {
  if (z.empty()) throw ParameterError("speed vector must be nonempty");
  for (const auto& zi : z)
    if (zi < 1) throw ParameterError("speed " + zi.str() + " below 1");
}

long to_long(const mpz_class& v) {
  if (!v.fits_slong_p()) throw ParameterError("index out of range");
  return v.get_si();
}

}  // namespace

void check_delta(const Rational& delta) {
  if (delta.sign() <= 0 || !(delta < kHalf))
    throw ParameterError("delta " + delta.str() + " outside (0,1/2)");
}

CoveringConfig::CoveringConfig(int d_, int N_) : CoveringConfig(d_, N_, Rational(1, d_ + 2)) {}

CoveringConfig::CoveringConfig(int d_, int N_, Rational delta_) : d(d_), N(N_), delta(std::move(delta_)) {
  if (d < 1) throw ParameterError("d must be positive");
  if (N < 1) throw ParameterError("N must be positive");
  check_delta(delta);
}

Interval kwai(long k, const Rational& delta) {
  return Interval::closed(Rational(k) + delta, Rational(k + 1) - delta);
}

Interval bridge(long k, const Rational& delta) { return Interval::open(Rational(k) - delta, Rational(k) + delta); }

IntervalSet kwai_range(int N, const Rational& delta) {
  std::vector<Interval> v;
  for (int l = 0; l < N; ++l) v.push_back(kwai(l, delta));
  return IntervalSet(std::move(v));
}

IntervalSet scaled_bridges(const Rational& z, int N, const Rational& delta) {
  long kmax = to_long((z * (Rational(N) - delta) + delta).floor());
  std::vector<Interval> v;
  for (long k = 0; k <= kmax; ++k)
    v.push_back(Interval::open((Rational(k) - delta) / z, (Rational(k) + delta) / z));
  return IntervalSet(std::move(v));
}

bool feather_contains(const std::vector<Rational>& z, const FeatherIndex& f, const Rational& delta) {
  if (z.size() != f.k.size()) throw ParameterError("feather index dimension mismatch");
  const Rational l(f.l);
  for (size_t i = 0; i < z.size(); ++i) {
    Rational k(f.k[i]);
    if (z[i] < (k + delta) / (l + 1 - delta)) return false;
    if (z[i] > (k + 1 - delta) / (l + delta)) return false;
  }
  for (size_t i = 0; i < z.size(); ++i)
    for (size_t j = 0; j < z.size(); ++j) {
      if (i == j) continue;
      if (z[i] / (Rational(f.k[i]) + delta) - z[j] / (Rational(f.k[j]) + 1 - delta) < 0) return false;
    }
  return true;
}

IntervalSet membership_residual(const std::vector<Rational>& z, const CoveringConfig& config) {
  check_speeds(z);
  IntervalSet covered;
  for (const auto& zi : z) covered = unite(covered, scaled_bridges(zi, config.N, config.delta));
  return subtract(kwai_range(config.N, config.delta), covered);
}

std::optional<Rational> membership_witness(const std::vector<Rational>& z, const CoveringConfig& config) {
  return membership_residual(z, config).min();
}

bool beam_contains(const std::vector<Rational>& z, const FeatherIndex& f, const Rational& delta) {
  const Rational l(f.l);
  for (size_t i = 0; i < z.size(); ++i) {
    Rational k(f.k[i]);
    if (k < (l + delta) * z[i] + delta - 1 || k > (l + 1 - delta) * z[i] - delta) return false;
  }
  for (size_t i = 0; i < z.size(); ++i)
    for (size_t j = 0; j < z.size(); ++j) {
      if (i == j) continue;
      Rational lhs = Rational(f.k[j]) * z[i] - Rational(f.k[i]) * z[j];
      if (lhs < (delta - 1) * z[i] + delta * z[j]) return false;
    }
  return true;
}

std::optional<FeatherIndex> beam_lattice_point(const std::vector<Rational>& z, const CoveringConfig& config) {
  check_speeds(z);
  const Rational& delta = config.delta;
  const size_t d = z.size();
  for (long l = 0; l < config.N; ++l) {
    const Rational lr(l);
    std::vector<long> lo(d), hi(d);
    bool box_empty = false;
    for (size_t i = 0; i < d; ++i) {
      lo[i] = std::max(0L, to_long(((lr + delta) * z[i] + delta - 1).ceil()));
      hi[i] = to_long(((lr + 1 - delta) * z[i] - delta).floor());
      if (hi[i] < lo[i]) box_empty = true;
    }
    if (box_empty) continue;
    FeatherIndex f{std::vector<long>(d), l};
    // Depth-first over coordinates; each new coordinate is checked against the
    // already assigned ones so the first complete hit is lexicographically least.
    std::function<bool(size_t)> place = [&](size_t i) -> bool {
      if (i == d) return true;
      for (long k = lo[i]; k <= hi[i]; ++k) {
        f.k[i] = k;
        bool ok = true;
        for (size_t j = 0; j < i && ok; ++j) {
          Rational ki(k), kj(f.k[j]);
          ok = kj * z[i] - ki * z[j] >= (delta - 1) * z[i] + delta * z[j] &&
               ki * z[j] - kj * z[i] >= (delta - 1) * z[j] + delta * z[i];
        }
        if (ok && place(i + 1)) return true;
      }
      return false;
    };
    if (place(0)) return f;
  }
  return std::nullopt;
}

std::optional<FeatherIndex> feather_search(const std::vector<Rational>& z, const CoveringConfig& config) {
  check_speeds(z);
  const Rational& delta = config.delta;
  const size_t d = z.size();
  for (long l = 0; l < config.N; ++l) {
    // Rectangle of the feather solved for k_i; every candidate is then tested
    // with feather_contains.
    std::vector<long> lo(d), hi(d);
    bool box_empty = false;
    for (size_t i = 0; i < d; ++i) {
      lo[i] = std::max(0L, to_long((z[i] * (Rational(l) + delta) - 1 + delta).floor()));
      hi[i] = to_long((z[i] * (Rational(l + 1) - delta) - delta).ceil());
      if (hi[i] < lo[i]) box_empty = true;
    }
    if (box_empty) continue;
    FeatherIndex f{lo, l};
    while (true) {
      if (feather_contains(z, f, delta)) return f;
      size_t i = d;
      while (i > 0 && f.k[i - 1] == hi[i - 1]) {
        f.k[i - 1] = lo[i - 1];
        --i;
      }
      if (i == 0) break;
      ++f.k[i - 1];
    }
  }
  return std::nullopt;
}

std::vector<std::pair<int, Rational>> feather_lower_face(const FeatherIndex& f, const Rational& delta) {
  std::vector<std::pair<int, Rational>> out;
  for (size_t i = 0; i < f.k.size(); ++i)
    out.emplace_back(static_cast<int>(i + 1), (Rational(f.k[i]) + delta) / (Rational(f.l) + 1 - delta));
  return out;
}

bool on_lower_face(const std::vector<Rational>& z, const FeatherIndex& f, const Rational& delta) {
  if (!feather_contains(z, f, delta)) return false;
  auto face = feather_lower_face(f, delta);
  for (size_t i = 0; i < z.size(); ++i)
    if (z[i] == face[i].second) return true;
  return false;
}

Rational residual_kwai_guarantee(const Rational& z, const Rational& delta) {
  if (delta > Rational(1, 4)) throw UnsupportedParameter("residual_kwai_guarantee requires delta <= 1/4");
  if (delta.sign() <= 0) throw ParameterError("delta must be positive");
  if (z < 1) throw ParameterError("z must be at least 1");
  if (z >= (2 - delta) / (1 - delta)) return (1 - 2 * delta) / z;
  return (1 - delta) / z - delta;
}

}  // namespace lrc
