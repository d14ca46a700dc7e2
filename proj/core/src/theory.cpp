#include "mime/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "mime/parallel.hpp"
#include "mime/random_stream.hpp"

namespace mime {

std::string_view to_string(Side side) noexcept {
  return side == Side::positive_class ? "positive-class" : "negative-class";
}

Side side_from_string(std::string_view name) {
  if (name == "positive-class" || name == "positive") return Side::positive_class;
  if (name == "negative-class" || name == "negative") return Side::negative_class;
  throw std::invalid_argument("side must be 'positive-class' or 'negative-class', got '" +
                              std::string(name) + "'");
}

void DisplacementSpec::validate() const {
  if (!(delta_cap > 0.0) || !std::isfinite(delta_cap)) {
    throw std::invalid_argument("displacement: delta_cap must be positive");
  }
}

std::string_view to_string(Theorem t) noexcept {
  switch (t) {
    case Theorem::T1: return "T1";
    case Theorem::T2: return "T2";
    case Theorem::T3: return "T3";
  }
  return "T1";
}

std::string_view to_string(TheoremCase c) noexcept {
  return c == TheoremCase::case1 ? "case1" : "case2";
}

double expected_update_exact(const GroupModel& group, double d_current) {
  return signed_tail_weight(group, d_current);
}

namespace {

void require_equal_priors(const GroupModel& g, const char* who) {
  if (g.prior() != 0.5) {
    throw std::invalid_argument(std::string(who) + ": requires prior 0.5, got " +
                                std::to_string(g.prior()));
  }
}

void require_equal_priors(const PopulationModel& pop, const char* who) {
  require_equal_priors(pop.major, who);
  require_equal_priors(pop.minor, who);
}

}  // namespace

double expected_update_small_delta(const GroupModel& group, double delta, double group_gap_offset) {
  require_equal_priors(group, "expected_update_small_delta");
  const double effective = delta - group_gap_offset;
  if (effective < 0.0) {
    throw std::invalid_argument("expected_update_small_delta: delta - offset must be >= 0");
  }
  const double d = ideal_threshold(group);
  return 2.0 * group.prior() * pdf(group.class2(), d) * effective;
}

double small_delta_relative_error(const GroupModel& group, double delta, Side side) {
  const double s = side == Side::positive_class ? 1.0 : -1.0;
  const double d = ideal_threshold(group);
  // Favourable expected move: +T on the right, -T on the left.
  const double exact = s * expected_update_exact(group, d + s * delta);
  const double approx = expected_update_small_delta(group, delta, 0.0);
  if (exact == 0.0) return approx == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::fabs(approx - exact) / std::fabs(exact);
}

namespace {

struct SharedQuantities {
  double d_major;
  double d_minor;
  double delta;
  double o_major;
  double o_minor;
  double p2_major;
  double p2_minor;
};

SharedQuantities shared_quantities(const PopulationModel& pop) {
  SharedQuantities q{};
  q.d_major = ideal_threshold(pop.major);
  q.d_minor = ideal_threshold(pop.minor);
  q.delta = q.d_minor - q.d_major;
  q.o_major = overlap(pop.major);
  q.o_minor = overlap(pop.minor);
  q.p2_major = pdf(pop.major.class2(), q.d_major);
  q.p2_minor = pdf(pop.minor.class2(), q.d_minor);
  return q;
}

void put_shared(TheoremVerdict& v, const SharedQuantities& q, const DisplacementSpec& spec) {
  v.quantities["d_ideal_major"] = q.d_major;
  v.quantities["d_ideal_minor"] = q.d_minor;
  v.quantities["delta"] = q.delta;
  v.quantities["Delta"] = spec.delta_cap;
  v.quantities["O_major"] = q.o_major;
  v.quantities["O_minor"] = q.o_minor;
  v.quantities["p2_major_at_ideal"] = q.p2_major;
  v.quantities["p2_minor_at_ideal"] = q.p2_minor;
  v.quantities["density_ratio"] = q.p2_minor > 0.0 ? q.p2_major / q.p2_minor : std::numeric_limits<double>::infinity();
}

// First-order regime check for both groups; records the relative errors.
bool small_displacement_premise(TheoremVerdict& v, const PopulationModel& pop,
                                double major_displacement, double minor_displacement, Side side) {
  const double e_major = small_delta_relative_error(pop.major, major_displacement, side);
  const double e_minor = small_delta_relative_error(pop.minor, minor_displacement, side);
  v.quantities["small_delta_rel_error_major"] = e_major;
  v.quantities["small_delta_rel_error_minor"] = e_minor;
  const bool ok = e_major <= kSmallDisplacementTolerance && e_minor <= kSmallDisplacementTolerance;
  v.quantities["small_displacement_premise"] = ok ? 1.0 : 0.0;
  return ok;
}

}  // namespace

TheoremVerdict check_theorem1(const PopulationModel& pop, const DisplacementSpec& spec) {
  spec.validate();
  require_equal_priors(pop, "check_theorem1");
  const auto q = shared_quantities(pop);

  TheoremVerdict v;
  v.theorem = Theorem::T1;
  put_shared(v, q, spec);
  const bool same_hyperplane = std::fabs(q.delta) < kSameHyperplaneTolerance;
  const bool harder_minor = q.o_minor > q.o_major;
  const bool denser_minor = q.p2_minor > q.p2_major;
  const bool premise =
      small_displacement_premise(v, pop, spec.delta_cap, spec.delta_cap, spec.side);
  v.quantities["overlap_margin"] = q.o_minor - q.o_major;
  v.quantities["density_margin"] = q.p2_minor - q.p2_major;
  v.holds = same_hyperplane && harder_minor && denser_minor && premise;
  return v;
}

TheoremVerdict check_theorem2(const PopulationModel& pop, const DisplacementSpec& spec) {
  spec.validate();
  require_equal_priors(pop, "check_theorem2");
  const auto q = shared_quantities(pop);
  if (std::fabs(q.delta) >= spec.delta_cap) {
    throw std::invalid_argument("check_theorem2: |delta| = " + std::to_string(std::fabs(q.delta)) +
                                " is not below Delta = " + std::to_string(spec.delta_cap));
  }

  if (std::fabs(q.delta) < kSameHyperplaneTolerance) {
    TheoremVerdict v = check_theorem1(pop, spec);
    v.theorem = Theorem::T2;
    v.quantities["f"] = theorem2_f(pop);
    return v;
  }

  TheoremVerdict v;
  v.theorem = Theorem::T2;
  put_shared(v, q, spec);
  // Positive oriented delta: minority ideal on the displaced hyperplane's side.
  const double oriented = spec.sign() * q.delta;
  const double f = theorem2_f(pop);
  const double ratio = q.p2_major / q.p2_minor;
  const double rhs = 1.0 - oriented / spec.delta_cap;
  v.quantities["oriented_delta"] = oriented;
  v.quantities["f"] = f;
  v.quantities["overlap_ratio"] = q.o_major / q.o_minor;
  v.quantities["ratio_bound"] = rhs;
  v.quantities["overlap_ratio_bound"] = rhs * f;

  const bool premise =
      small_displacement_premise(v, pop, spec.delta_cap, spec.delta_cap - oriented, spec.side);
  if (oriented < 0.0) {
    v.theorem_case = TheoremCase::case1;
    v.quantities["condition_margin"] = q.p2_minor - q.p2_major;
    v.holds = q.p2_minor > q.p2_major && premise;
  } else {
    v.theorem_case = TheoremCase::case2;
    v.quantities["condition_margin"] = rhs - ratio;
    v.holds = ratio < rhs && premise;
  }
  return v;
}

TheoremVerdict check_theorem3(const PopulationModel& pop, const DisplacementSpec& spec,
                              bool use_domain_gap) {
  spec.validate();
  const double d_major = ideal_threshold(pop.major);
  const double d_minor = ideal_threshold(pop.minor);
  const double delta = d_minor - d_major;
  if (!use_domain_gap && std::fabs(delta) >= kSameHyperplaneTolerance) {
    throw std::invalid_argument(
        "check_theorem3: the no-gap form needs a shared ideal threshold, delta = " +
        std::to_string(delta));
  }
  const double d = d_major;
  const double D = spec.delta_cap;

  const double minor_right = signed_tail_weight(pop.minor, d + D);
  const double minor_left = -signed_tail_weight(pop.minor, d - D);
  const double major_right = signed_tail_weight(pop.major, d + D);
  const double major_left = -signed_tail_weight(pop.major, d - D);
  const double lhs = std::min(minor_right, minor_left);
  const double rhs = std::max(major_right, major_left);

  TheoremVerdict v;
  v.theorem = Theorem::T3;
  v.quantities["d_ideal_major"] = d_major;
  v.quantities["d_ideal_minor"] = d_minor;
  v.quantities["delta"] = delta;
  v.quantities["Delta"] = D;
  v.quantities["O_major"] = overlap(pop.major);
  v.quantities["O_minor"] = overlap(pop.minor);
  v.quantities["T_minor_plus"] = minor_right;
  v.quantities["neg_T_minor_minus"] = minor_left;
  v.quantities["T_major_plus"] = major_right;
  v.quantities["neg_T_major_minus"] = major_left;
  v.quantities["min_minor"] = lhs;
  v.quantities["max_major"] = rhs;
  v.quantities["condition_margin"] = lhs - rhs;
  v.quantities["use_domain_gap"] = use_domain_gap ? 1.0 : 0.0;
  v.holds = lhs > rhs;
  return v;
}

// ---------------------------------------------------------------------------

void HyperplaneMcConfig::validate() const {
  if (K < 2) throw std::invalid_argument("mc: K must be >= 2");
  if (trials < 1) throw std::invalid_argument("mc: trials must be >= 1");
  if (!(learning_rate >= 0.0)) throw std::invalid_argument("mc: learning_rate must be >= 0");
  schedule.validate();
  if (initial_displacement) initial_displacement->validate();
}

namespace {

constexpr int kMaxResamples = 10000;

struct TrialOutcome {
  double d_major = 0.0;  // d_K with a majority K-th sample
  double d_minor = 0.0;  // d_K with a minority K-th sample
  std::size_t resamples = 0;
};

double final_threshold(Perceptron1D model, const std::vector<LabeledSample>& data,
                       const TrainingSchedule& schedule, std::uint64_t train_seed) {
  RandomStream order_rng(train_seed);
  train(model, data, schedule, order_rng);
  return model.threshold();
}

TrialOutcome run_hyperplane_trial(const PopulationModel& pop, const HyperplaneMcConfig& cfg,
                                  double initial_bias, std::size_t trial) {
  RandomStream rng = RandomStream::derived(cfg.master_seed, trial);
  const auto n = static_cast<std::size_t>(cfg.K - 1);
  std::vector<LabeledSample> data(n);
  TrialOutcome out;
  for (;;) {
    std::size_t positives = 0;
    for (auto& s : data) {
      s = sample(pop.major, rng);
      if (s.y == ClassLabel::positive) ++positives;
    }
    // A single sample cannot hold both classes; only larger sets are redrawn.
    if (n < 2 || (positives != 0 && positives != n)) break;
    if (++out.resamples > kMaxResamples) {
      throw std::runtime_error("mc: could not draw a two-class majority set; check priors");
    }
  }
  // One pair of uniforms shared by both candidate K-th samples.
  const double u_label = rng.uniform();
  const double u_x = rng.uniform();
  auto kth = [&](const GroupModel& g) {
    const ClassLabel y = u_label < g.prior() ? ClassLabel::positive : ClassLabel::negative;
    return LabeledSample{class_quantile(g, y, u_x), y};
  };
  const LabeledSample x_major = kth(pop.major);
  const LabeledSample x_minor = kth(pop.minor);
  const std::uint64_t train_seed = derive_seed(rng.seed(), 1);

  const bool single_pass = cfg.schedule.epochs == 1 && !cfg.schedule.shuffle;
  if (single_pass) {
    // With one ordered pass, training on D_K is training on D_{K-1} followed
    // by one step on the appended sample; share the common prefix.
    Perceptron1D prefix(initial_bias, cfg.learning_rate);
    for (const auto& s : data) prefix.update(s.x, s.y);
    Perceptron1D a = prefix;
    Perceptron1D b = prefix;
    a.update(x_major.x, x_major.y);
    b.update(x_minor.x, x_minor.y);
    out.d_major = a.threshold();
    out.d_minor = b.threshold();
    return out;
  }
  const Perceptron1D init(initial_bias, cfg.learning_rate);
  data.push_back(x_major);
  out.d_major = final_threshold(init, data, cfg.schedule, train_seed);
  data.back() = x_minor;
  out.d_minor = final_threshold(init, data, cfg.schedule, train_seed);
  return out;
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_and_se(const std::vector<double>& v) {
  MeanSe r;
  if (v.empty()) return r;
  double sum = 0.0;
  for (double x : v) sum += x;
  r.mean = sum / static_cast<double>(v.size());
  if (v.size() < 2) return r;
  double ss = 0.0;
  for (double x : v) ss += (x - r.mean) * (x - r.mean);
  const double var = ss / static_cast<double>(v.size() - 1);
  r.se = std::sqrt(var / static_cast<double>(v.size()));
  return r;
}

HyperplaneErrorEstimate summarize(const std::vector<double>& d, double d_ideal,
                                  std::size_t resamples) {
  std::vector<double> err(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) err[i] = std::fabs(d_ideal - d[i]);
  const MeanSe e = mean_and_se(err);
  HyperplaneErrorEstimate est;
  est.mean_abs_error = e.mean;
  est.std_error = e.se;
  est.mean_d = mean_and_se(d).mean;
  est.trials = d.size();
  est.resamples = resamples;
  return est;
}

}  // namespace

PairedHyperplaneComparison mc_paired_hyperplane(const PopulationModel& pop,
                                                const HyperplaneMcConfig& cfg) {
  cfg.validate();
  const double d_ideal = ideal_threshold(pop.major);
  double initial_bias = 0.0;
  if (cfg.initial_displacement) {
    initial_bias = -(d_ideal + cfg.initial_displacement->sign() * cfg.initial_displacement->delta_cap);
  }

  std::vector<TrialOutcome> outcomes(cfg.trials);
  parallel_for(cfg.trials, cfg.jobs, [&](std::size_t t) {
    outcomes[t] = run_hyperplane_trial(pop, cfg, initial_bias, t);
  });

  std::vector<double> d_major(cfg.trials);
  std::vector<double> d_minor(cfg.trials);
  std::vector<double> diff(cfg.trials);
  std::size_t resamples = 0;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    d_major[t] = outcomes[t].d_major;
    d_minor[t] = outcomes[t].d_minor;
    diff[t] = std::fabs(d_ideal - d_minor[t]) - std::fabs(d_ideal - d_major[t]);
    resamples += outcomes[t].resamples;
  }

  PairedHyperplaneComparison cmp;
  cmp.major = summarize(d_major, d_ideal, resamples);
  cmp.minor = summarize(d_minor, d_ideal, resamples);
  const MeanSe md = mean_and_se(diff);
  cmp.mean_difference = md.mean;
  cmp.std_error = md.se;
  cmp.z_score = md.se > 0.0 ? -md.mean / md.se : 0.0;
  return cmp;
}

HyperplaneErrorEstimate mc_expected_hyperplane(const PopulationModel& pop, Group kth_group,
                                               const HyperplaneMcConfig& cfg) {
  const auto cmp = mc_paired_hyperplane(pop, cfg);
  return kth_group == Group::major ? cmp.major : cmp.minor;
}

}  // namespace mime
