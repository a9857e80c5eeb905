#include "lrc/analysis.hpp"

#include <algorithm>
#include <sstream>

namespace lrc {

Rational measure_bound(const Rational& delta) { return 2 * delta * (1 - 2 * delta) / (1 - delta); }

MeasureReport k0_measure(const Rational& z, const Rational& delta) {
  check_delta(delta);
  if (z < 1) throw ParameterError("k0_measure: z must be at least 1");
  MeasureReport r{z, delta, Rational(), measure_bound(delta), false};
  const mpz_class a = (delta * (z - 1)).ceil();
  const mpz_class b = ((1 - delta) * z + delta).floor();
  const long first = std::max<long>(0, a.get_si() - 1);
  const long last = b.get_si() + 1;
  std::vector<Interval> parts;
  for (long k = first; k <= last; ++k) {
    Interval br = bridge(k, delta);
    parts.push_back(Interval::open(br.lo / z, br.hi / z));
  }
  r.measure = intersect(IntervalSet(std::move(parts)), IntervalSet(kwai(0, delta))).measure();
  r.tight = r.measure == r.bound;
  return r;
}

std::string measure_curve_csv(const Rational& delta, const Rational& lo, const Rational& hi, const Rational& step) {
  if (step.sign() <= 0) throw ParameterError("measure curve: step must be positive");
  if (hi < lo) throw ParameterError("measure curve: empty range");
  std::ostringstream out;
  out << "z,measure,bound\n";
  for (Rational z = lo; z <= hi; z += step) {
    MeasureReport r = k0_measure(z, delta);
    out << z << "," << r.measure << "," << r.bound << "\n";
  }
  return out.str();
}

std::pair<Rational, Rational> gap_bounds(int d) {
  if (d < 1) throw ParameterError("gap_bounds: d must be positive");
  return {Rational(1, 2 * d + 1), Rational(1, d + 2)};
}

std::optional<std::vector<BridgeUse>> covering_bridges(const std::vector<Rational>& z, const CoveringConfig& config) {
  const Rational& delta = config.delta;
  std::vector<BridgeUse> all;
  for (size_t i = 0; i < z.size(); ++i) {
    if (z[i] < 1) throw ParameterError("covering_bridges: coordinates must be at least 1");
    const long last = (z[i] * (config.N - delta) + delta).floor().get_si() + 1;
    for (long k = 0; k <= last; ++k) {
      Interval br = bridge(k, delta);
      all.push_back({static_cast<int>(i + 1), k, Interval::open(br.lo / z[i], br.hi / z[i])});
    }
  }
  std::vector<BridgeUse> chain;
  for (int l = 0; l < config.N; ++l) {
    const Interval target = kwai(l, delta);
    // Each pick contains the current point and reaches furthest right.
    Rational x = target.lo;
    while (x <= target.hi) {
      const BridgeUse* best = nullptr;
      for (const auto& b : all)
        if (b.scaled.lo < x && x < b.scaled.hi && (!best || b.scaled.hi > best->scaled.hi)) best = &b;
      if (!best) return std::nullopt;
      chain.push_back(*best);
      x = best->scaled.hi;
    }
  }
  return chain;
}

std::vector<Rational> counterexample_point(const std::vector<Rational>& eps) {
  if (eps.size() != 4) throw ParameterError("counterexample needs four epsilons");
  const Rational& e1 = eps[0];
  const Rational& e2 = eps[1];
  const Rational& e3 = eps[2];
  const Rational& e4 = eps[3];
  if (!(e1.sign() > 0 && e1 < e3 && e3 < e2 && e2 < e4 && e4 < Rational(32, 3211)))
    throw ParameterError("counterexample requires 0 < eps1 < eps3 < eps2 < eps4 < 32/3211");
  return {Rational(13, 5) * (1 - e1), Rational(3211, 935) * (1 - e2), Rational(247, 55) * (1 - e3),
          Rational(61009, 10285) * (1 - e4)};
}

CounterexampleReport counterexample_verify(const std::vector<Rational>& eps) {
  CounterexampleReport r;
  r.z = counterexample_point(eps);
  const CoveringConfig one(4, 1);
  const CoveringConfig two(4, 2);
  r.residual_one_round = membership_residual(r.z, one);
  r.residual_two_rounds = membership_residual(r.z, two);
  if (auto c = covering_bridges(r.z, one)) r.one_round_cover = std::move(*c);
  r.two_round_witness = r.residual_two_rounds.min();
  r.verified = r.residual_one_round.empty() && !r.one_round_cover.empty() && r.two_round_witness.has_value();
  return r;
}

IntervalSet loneliness_windows(const RunnerInstance& inst) {
  check_delta(inst.delta);
  if (inst.horizon.sign() <= 0) throw ParameterError("loneliness_windows: horizon must be positive");
  if (!inst.starts.empty() && inst.starts.size() != inst.speeds.size())
    throw ParameterError("loneliness_windows: one start per speed");
  IntervalSet result(Interval::left_open(Rational(0), inst.horizon));
  for (size_t i = 0; i < inst.speeds.size(); ++i) {
    const Rational& w = inst.speeds[i];
    const Rational p = inst.starts.empty() ? Rational(0) : inst.starts[i];
    if (w.sign() <= 0) throw ParameterError("loneliness_windows: speeds must be positive");
    if (p.sign() < 0 || p >= 1) throw ParameterError("loneliness_windows: starts must lie in [0,1)");
    const long last = (inst.horizon * w + p).ceil().get_si();
    std::vector<Interval> parts;
    for (long k = 0; k <= last; ++k) {
      Interval kw = kwai(k, inst.delta);
      parts.push_back(Interval::closed((kw.lo - p) / w, (kw.hi - p) / w));
    }
    result = intersect(result, IntervalSet(std::move(parts)));
    if (result.empty()) break;
  }
  return result;
}

std::optional<Rational> nd_round_check(const std::vector<Rational>& w, int N) {
  if (w.size() < 2) throw ParameterError("nd_round_check: at least two speeds");
  if (N < 1) throw ParameterError("nd_round_check: N must be positive");
  RunnerInstance inst;
  inst.speeds = w;
  inst.delta = Rational(1, static_cast<long>(w.size()) + 1);
  inst.horizon = N / *std::min_element(w.begin(), w.end());
  return loneliness_windows(inst).min();
}

bool fractional_gap_identity_check(const Rational& v, const Rational& vp, const Rational& t, const Rational& delta) {
  if (t.sign() <= 0) throw ParameterError("fractional_gap_identity_check: t must be positive");
  auto in_window = [&](const Rational& x) { return x >= delta && x <= 1 - delta; };
  const bool lhs = in_window(abs((t * v).frac() - (t * vp).frac()));
  const bool rhs = in_window((t * abs(v - vp)).frac());
  return lhs == rhs;
}

}  // namespace lrc
