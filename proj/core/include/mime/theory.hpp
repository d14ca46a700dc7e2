#pragma once

// Expected perceptron updates, existence-theorem checkers, and the paired
// Monte Carlo estimate of the K-th sample's effect on the learned threshold.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "mime/distributions.hpp"
#include "mime/perceptron.hpp"

namespace mime {

/// Which class the displaced hyperplane sits closer to. A threshold nearer
/// the positive class lies right of the ideal: d = d_ideal + delta_cap.
enum class Side : std::uint8_t { positive_class, negative_class };

std::string_view to_string(Side side) noexcept;
Side side_from_string(std::string_view name);

struct DisplacementSpec {
  double delta_cap = 0.1;
  Side side = Side::positive_class;

  /// Throws std::invalid_argument unless delta_cap > 0.
  void validate() const;
  /// +1 for the positive side, -1 otherwise.
  double sign() const noexcept { return side == Side::positive_class ? 1.0 : -1.0; }

  friend bool operator==(const DisplacementSpec&, const DisplacementSpec&) = default;
};

enum class Theorem : std::uint8_t { T1, T2, T3 };
enum class TheoremCase : std::uint8_t { case1, case2 };

std::string_view to_string(Theorem t) noexcept;
std::string_view to_string(TheoremCase c) noexcept;

struct TheoremVerdict {
  Theorem theorem = Theorem::T1;
  bool holds = false;
  std::optional<TheoremCase> theorem_case;
  std::map<std::string, double> quantities;  // ordered for stable output
};

/// Expected bias change per unit learning rate for one sample drawn from the
/// group while the threshold sits at d_current: T(d_current).
double expected_update_exact(const GroupModel& group, double d_current);

/// First-order form 2 * prior * p2(d_ideal) * (delta - offset). Requires
/// prior 0.5 and delta - offset >= 0; throws std::invalid_argument otherwise.
double expected_update_small_delta(const GroupModel& group, double delta, double group_gap_offset);

/// Relative deviation |approx - exact| / |exact| of the first-order form for
/// a threshold displaced by `delta` from the group's ideal towards `side`.
double small_delta_relative_error(const GroupModel& group, double delta, Side side);

/// Relative tolerance used by the checkers to decide that a displacement is
/// in the first-order regime the proofs rely on.
inline constexpr double kSmallDisplacementTolerance = 0.05;
/// |delta| below this counts as "same ideal hyperplane".
inline constexpr double kSameHyperplaneTolerance = 1e-9;

TheoremVerdict check_theorem1(const PopulationModel& pop, const DisplacementSpec& spec);
TheoremVerdict check_theorem2(const PopulationModel& pop, const DisplacementSpec& spec);
TheoremVerdict check_theorem3(const PopulationModel& pop, const DisplacementSpec& spec,
                              bool use_domain_gap);

struct HyperplaneErrorEstimate {
  double mean_abs_error = 0.0;  // E|d_ideal_major - d_K|
  double mean_d = 0.0;          // E[d_K]
  double std_error = 0.0;       // standard error of mean_abs_error
  std::size_t trials = 0;
  std::size_t resamples = 0;    // degenerate K-1 draws redrawn
};

struct HyperplaneMcConfig {
  int K = 51;
  TrainingSchedule schedule{1, 1, false};
  double learning_rate = 0.01;
  /// Fixed initialization. Without it training starts at b = 0; with it the
  /// threshold starts at d_ideal_major +/- delta_cap.
  std::optional<DisplacementSpec> initial_displacement;
  std::size_t trials = 20000;
  std::uint64_t master_seed = 0;
  unsigned jobs = 0;  // 0 = hardware concurrency

  /// Throws std::invalid_argument for K < 2 or trials < 1.
  void validate() const;
};

/// Estimates E[d_K] and E|d_ideal_major - d_K| where the first K-1 samples
/// come from the majority and the K-th from `kth_group`. Two calls with the
/// same config share every draw except the group of the K-th sample, which
/// is generated from the same uniforms (common random numbers).
HyperplaneErrorEstimate mc_expected_hyperplane(const PopulationModel& pop, Group kth_group,
                                               const HyperplaneMcConfig& cfg);

struct PairedHyperplaneComparison {
  HyperplaneErrorEstimate major;
  HyperplaneErrorEstimate minor;
  double mean_difference = 0.0;  // mean of |err_minor| - |err_major| per trial
  double std_error = 0.0;        // of mean_difference
  double z_score = 0.0;          // -mean_difference / std_error; > 0 favours minor
};

PairedHyperplaneComparison mc_paired_hyperplane(const PopulationModel& pop,
                                                const HyperplaneMcConfig& cfg);

}  // namespace mime
