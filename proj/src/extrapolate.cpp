#include "ptstring/extrapolate.hpp"

#include "ptstring/density.hpp"
#include "ptstring/sumrules.hpp"

namespace ptstring {

namespace {

constexpr int kBaseLength = 9;

std::optional<std::vector<Wide>> try_base(const Wide& alpha) {
  std::vector<Wide> a;
  a.reserve(kBaseLength);
  for (int s = 1; s <= kBaseLength; ++s) {
    const Wide z = exact_sum_rule_as<Wide>(DensityKind::LinearPT, s, alpha);
    if (z <= 0) return std::nullopt;
    a.push_back(pow(z, Wide(-1) / s));
  }
  return a;
}

struct Level {
  std::optional<Wide> value;        // last entry of the final level
  std::optional<Wide> denominator;  // its Shanks denominator (depth >= 1)
};

// Returns nullopt outside the domain where every Z(s) > 0.
std::optional<Level> evaluate(const Wide& alpha, int depth) {
  auto base = try_base(alpha);
  if (!base) return std::nullopt;
  Sequence<Wide> seq(base->begin(), base->end());
  Level out;
  for (int d = 0; d < depth; ++d) {
    if (d == depth - 1) {
      const std::size_t n = seq.size() - 2;
      if (seq[n - 1] && seq[n] && seq[n + 1]) {
        out.denominator = *seq[n + 1] + *seq[n - 1] - 2 * *seq[n];
      }
    }
    seq = shanks(seq);
  }
  out.value = seq.back();
  return out;
}

void check_depth(int depth) {
  if (depth < 0 || depth > 4) throw Error(ErrorCode::Parameter, "depth must lie in 0..4");
}

// δ (S(α+δ) − S(α−δ)) / 2 tends to the residue at a simple pole and to 0 at a
// removable point.
std::optional<Wide> residue_probe(const Wide& alpha, int depth, const Wide& delta) {
  auto hi = evaluate(alpha + delta, depth);
  auto lo = evaluate(alpha - delta, depth);
  if (!hi || !lo || !hi->value || !lo->value) return std::nullopt;
  return delta * (*hi->value - *lo->value) / 2;
}

}  // namespace

std::vector<std::optional<double>> shanks(const std::vector<double>& seq) {
  return shanks(Sequence<double>(seq.begin(), seq.end()));
}

std::optional<double> ShanksTable::last(int level) const {
  if (level < 0 || level >= static_cast<int>(levels.size())) return std::nullopt;
  const auto& row = levels[level];
  for (auto it = row.rbegin(); it != row.rend(); ++it) {
    if (*it) return *it;
  }
  return std::nullopt;
}

ShanksTable shanks_table(const std::vector<double>& seq, int depth) {
  ShanksTable t;
  t.base_sequence = seq;
  t.levels.emplace_back(seq.begin(), seq.end());
  for (int d = 0; d < depth && t.levels.back().size() >= 3; ++d) {
    t.levels.push_back(shanks(t.levels.back()));
  }
  return t;
}

std::vector<Wide> e1_base_sequence(double alpha) {
  auto base = try_base(Wide(alpha));
  if (!base) {
    throw Error(ErrorCode::NegativeSumRule,
                "some Z(s) <= 0: the spectrum is not entirely real and positive");
  }
  return *base;
}

double e1_estimate(double alpha, int depth) {
  check_depth(depth);
  const auto base = e1_base_sequence(alpha);
  Sequence<Wide> seq(base.begin(), base.end());
  for (int d = 0; d < depth; ++d) seq = shanks(seq);
  for (auto it = seq.rbegin(); it != seq.rend(); ++it) {
    if (*it) return static_cast<double>(**it);
  }
  throw Error(ErrorCode::NonConvergence, "every entry of the final Shanks level is a gap");
}

double singularity_estimate(int depth, double alpha_max) {
  check_depth(depth);
  constexpr double kStep = 0.01;

  if (depth == 0) {
    auto z9 = [](const Wide& a) { return exact_sum_rule_as<Wide>(DensityKind::LinearPT, 9, a); };
    Wide lo = 0;
    for (double a = kStep; a <= alpha_max + 1e-12; a += kStep) {
      Wide hi = a;
      if (z9(hi) <= 0) {
        for (int it = 0; it < 200 && hi - lo > Wide("1e-30"); ++it) {
          const Wide mid = (lo + hi) / 2;
          (z9(mid) > 0 ? lo : hi) = mid;
        }
        return static_cast<double>((lo + hi) / 2);
      }
      lo = hi;
    }
    throw Error(ErrorCode::NoSingularity, "Z(9) stays positive on the scanned range");
  }

  std::optional<Wide> prev_alpha;
  std::optional<Wide> prev_den;
  for (double a = kStep; a <= alpha_max + 1e-12; a += kStep) {
    const Wide alpha = a;
    auto level = evaluate(alpha, depth);
    if (!level) break;  // some Z(s) turned negative: the estimate is undefined beyond
    if (!level->denominator) {
      prev_den.reset();
      continue;
    }
    if (prev_den && (*prev_den > 0) != (*level->denominator > 0)) {
      Wide lo = *prev_alpha;
      Wide hi = alpha;
      const bool lo_positive = *prev_den > 0;
      for (int it = 0; it < 200 && hi - lo > Wide("1e-30"); ++it) {
        const Wide mid = (lo + hi) / 2;
        auto m = evaluate(mid, depth);
        if (!m || !m->denominator) break;
        ((*m->denominator > 0) == lo_positive ? lo : hi) = mid;
      }
      const Wide pole = (lo + hi) / 2;
      auto r1 = residue_probe(pole, depth, Wide("1e-9"));
      auto r2 = residue_probe(pole, depth, Wide("1e-12"));
      if (r1 && r2 && *r1 != 0 && abs(*r1 - *r2) <= abs(*r1) / 10) {
        return static_cast<double>(pole);
      }
    }
    prev_alpha = alpha;
    prev_den = level->denominator;
  }
  throw Error(ErrorCode::NoSingularity,
              "the accelerated estimate has no pole where all sum rules are positive");
}

}  // namespace ptstring
