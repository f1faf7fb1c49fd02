#ifndef REPARAM_DETECTORS_HPP
#define REPARAM_DETECTORS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "reparam/density.hpp"
#include "reparam/errors.hpp"
#include "reparam/numerics.hpp"
#include "reparam/vec.hpp"

namespace reparam {

enum class Label { Inlier, Outlier };

enum class Rule { DensityScore, Typicality, DensityRatio };

inline const char* to_string(Label l) {
  return l == Label::Inlier ? "inlier" : "outlier";
}

inline const char* to_string(Rule r) {
  switch (r) {
    case Rule::DensityScore: return "density_score";
    case Rule::Typicality: return "typicality";
    case Rule::DensityRatio: return "density_ratio";
  }
  return "?";
}

struct DetectorVerdict {
  double score = 0.0;
  Label label = Label::Inlier;
  Rule rule = Rule::DensityScore;
  std::vector<std::pair<std::string, double>> params;
};

// Density scoring: outlier iff p(x) <= lambda (equality goes to the
// lower-level set, i.e. outlier).
struct DensityScorer {
  Density density;
  double threshold_lambda = 0.0;
  double mass_level = 0.0;
  bool degenerate = false;   // score variance below 1e-18 at calibration
  bool off_target = false;   // no threshold could reach the mass level
  double inlier_fraction = 0.0;  // empirical, at the chosen threshold
};

// lambda is the empirical (1 - mass_level)-quantile of the density scores
// over n fresh samples (linear interpolation between order statistics).
// Score distributions with atoms can defeat that estimator: the quantile
// may land exactly on an atom whose mass straddles the level, in which case
// the <=-convention would label far more than (1 - mass_level) of the mass
// as outliers. If the empirical inlier fraction at the interpolated value
// misses mass_level by more than 0.01, the threshold steps down to the
// largest observed score that keeps the inlier fraction >= mass_level;
// when no score is feasible the quantile value is kept and the scorer is
// marked off_target.
inline DensityScorer calibrate_density_threshold(const Density& p,
                                                 double mass_level,
                                                 std::int64_t n,
                                                 RngState& rng) {
  if (!(mass_level > 0.5 && mass_level < 1.0))
    throw DomainError("mass_level must lie in (0.5, 1)");
  if (n < 100) throw DomainError("calibration needs n >= 100 samples");

  Vec scores(static_cast<std::size_t>(n));
  RunningMean var_acc;
  for (std::int64_t i = 0; i < n; ++i) {
    double s = std::exp(p.log_density(p.sampler(rng)));
    scores[static_cast<std::size_t>(i)] = s;
    var_acc.add(s);
  }
  std::sort(scores.begin(), scores.end());

  double h = (1.0 - mass_level) * static_cast<double>(n - 1);
  std::size_t k = static_cast<std::size_t>(h);
  double frac = h - static_cast<double>(k);
  double lambda = scores[k];
  if (k + 1 < scores.size()) lambda += frac * (scores[k + 1] - scores[k]);

  auto inlier_fraction_at = [&scores](double lam) {
    // fraction of scores strictly above lam
    std::size_t above = scores.end() -
                        std::upper_bound(scores.begin(), scores.end(), lam);
    return static_cast<double>(above) / static_cast<double>(scores.size());
  };

  DensityScorer scorer;
  scorer.density = p;
  scorer.mass_level = mass_level;
  scorer.degenerate = var_acc.variance() < 1e-18;

  double frac_at = inlier_fraction_at(lambda);
  if (!scorer.degenerate && std::fabs(frac_at - mass_level) > 0.01) {
    // atom-aware fallback: largest observed score keeping enough inlier mass
    bool found = false;
    for (std::size_t i = scores.size(); i-- > 0;) {
      if (i + 1 < scores.size() && scores[i] == scores[i + 1]) continue;
      double f = inlier_fraction_at(scores[i]);
      if (f >= mass_level) {
        lambda = scores[i];
        frac_at = f;
        found = true;
        break;
      }
    }
    scorer.off_target = !found;
  }
  scorer.threshold_lambda = lambda;
  scorer.inlier_fraction = frac_at;
  return scorer;
}

inline DetectorVerdict density_score_classify(const DensityScorer& scorer,
                                              const Vec& x) {
  check_dim(x, scorer.density.dim, "density_score_classify");
  DetectorVerdict v;
  v.rule = Rule::DensityScore;
  v.score = std::exp(scorer.density.log_density(x));
  v.label = v.score <= scorer.threshold_lambda ? Label::Outlier : Label::Inlier;
  v.params = {{"threshold_lambda", scorer.threshold_lambda},
              {"mass_level", scorer.mass_level},
              {"degenerate", scorer.degenerate ? 1.0 : 0.0}};
  return v;
}

// One- or N-sample typicality: statistic |H + mean log p| against eps.
struct TypicalityTest {
  Density density;
  double entropy_value = 0.0;
  double entropy_std_error = 0.0;
  std::int64_t entropy_n_mc = 0;  // 0 when analytic
  double epsilon = 0.0;
};

inline TypicalityTest make_typicality_test(const Density& p, double epsilon,
                                           std::int64_t n_mc, RngState& rng) {
  if (!(epsilon > 0.0)) throw DomainError("typicality epsilon must be > 0");
  TypicalityTest t;
  t.density = p;
  t.epsilon = epsilon;
  EntropyEstimate e = entropy(p, n_mc, rng);
  t.entropy_value = e.value;
  t.entropy_std_error = e.std_error;
  t.entropy_n_mc = e.n_mc;
  return t;
}

inline double typicality_statistic(const TypicalityTest& test,
                                   const std::vector<Vec>& batch) {
  if (batch.empty()) throw DomainError("typicality needs a non-empty batch");
  Vec logs;
  logs.reserve(batch.size());
  for (const Vec& x : batch) {
    check_dim(x, test.density.dim, "typicality_statistic");
    logs.push_back(test.density.log_density(x));
  }
  // fixed summation order makes the statistic exactly permutation-invariant
  std::sort(logs.begin(), logs.end());
  double sum = 0.0;
  for (double v : logs) sum += v;
  double mean_log = sum / static_cast<double>(batch.size());
  return std::fabs(test.entropy_value + mean_log);
}

inline DetectorVerdict typicality_classify(const TypicalityTest& test,
                                           const std::vector<Vec>& batch) {
  DetectorVerdict v;
  v.rule = Rule::Typicality;
  v.score = typicality_statistic(test, batch);
  v.label = v.score <= test.epsilon ? Label::Inlier : Label::Outlier;
  v.params = {{"epsilon", test.epsilon},
              {"entropy", test.entropy_value},
              {"entropy_n_mc", static_cast<double>(test.entropy_n_mc)}};
  return v;
}

// p_fg(x) / p_bg(x), computed in log space. Invariant under any joint
// invertible reparametrization: the Jacobians cancel.
inline double density_ratio_score(const Density& p_fg, const Density& p_bg,
                                  const Vec& x) {
  check_dim(x, p_fg.dim, "density_ratio_score");
  if (p_fg.dim != p_bg.dim)
    throw DimensionMismatch("density_ratio_score: densities disagree in dim");
  double lbg = p_bg.log_density(x);
  if (lbg == kNegInf)
    throw OutsideBackgroundSupport("background density vanishes at the "
                                   "queried point");
  double lfg = p_fg.log_density(x);
  if (lfg == kNegInf) return 0.0;
  return std::exp(lfg - lbg);
}

}  // namespace reparam

#endif  // REPARAM_DETECTORS_HPP
