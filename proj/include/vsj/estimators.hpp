#pragma once

#include "vsj/dataset.hpp"
#include "vsj/lsh_index.hpp"
#include "vsj/sampling.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vsj {

enum class DampeningKind { none, adaptive, fixed };

/// Scale-up applied when the low-stratum sampler exhausts its budget:
/// none returns the raw count, adaptive uses c_s = n_L/delta, fixed uses a constant.
struct Dampening {
	DampeningKind kind = DampeningKind::none;
	double factor = 1.0;

	/// "none", "adaptive", or a number in (0, 1].
	static Dampening parse(std::string_view text);
	std::string to_string() const;
	bool operator==(const Dampening &) const = default;
};

/// User-facing parameters; unset sizes take the defaults m_H = m_L = n,
/// delta = ceil(log2 n), m_R = ceil(1.5 n).
struct EstimatorParams {
	double tau_cos = 0.5;
	std::optional<std::uint64_t> m_h;
	std::optional<std::uint64_t> m_l;
	std::optional<std::uint64_t> delta;
	std::optional<std::uint64_t> m_r;
	Dampening dampening;
	std::uint64_t seed = 0;
	/// Count same-bucket rejections against the low-stratum budget.
	bool count_rejected = false;
	/// Threshold-dependent delta when delta is unset: 0.5 log n for tau >= 0.7,
	/// 2 log n for tau <= 0.3.
	bool threshold_delta_preset = false;
	/// Largest n for which the virtual-bucket N_H is enumerated exactly.
	std::uint64_t virtual_exact_limit = 5000;
};

struct ResolvedParams {
	double tau_cos;
	double tau_ang;
	std::uint64_t m_h;
	std::uint64_t m_l;
	std::uint64_t delta;
	std::uint64_t m_r;
	Dampening dampening;
	std::uint64_t seed;
	bool count_rejected;
	std::uint64_t virtual_exact_limit;
};

std::uint64_t log2_ceil(std::uint64_t n);

/// Fills defaults for a dataset of `n` vectors and validates every field.
ResolvedParams resolve(const EstimatorParams &params, std::uint64_t n);

struct EstimateReport {
	std::string estimator;
	double j_hat = 0.0;
	std::optional<double> j_h_hat;
	std::optional<double> j_l_hat;
	std::uint64_t n_true_sampled = 0;
	std::uint64_t samples_used = 0;
	std::uint64_t rejected = 0;
	std::uint64_t sim_evals = 0;
	bool safe_lower_bound = false;
	double tau_cos = 0.0;
	double tau_ang = 0.0;
	std::uint64_t total_pairs = 0;
	std::optional<double> n_h;
	bool clamped = false;
	bool degenerate = false;
	bool closed_form_fallback = false;
	bool n_h_estimated = false;
	std::vector<double> per_table;
};

/// key=value lines, fixed order.
std::string format_report(const EstimateReport &report);

struct SampleHResult {
	double j_h_hat = 0.0;
	std::uint64_t n_true = 0;
	std::uint64_t samples = 0;
	std::uint64_t sim_evals = 0;
};

struct SampleLResult {
	double j_l_hat = 0.0;
	bool safe = false;
	std::uint64_t n_true = 0;
	std::uint64_t samples = 0;
	std::uint64_t rejected = 0;
	std::uint64_t sim_evals = 0;
};

struct ConditionalProbs {
	double p_h_given_t;
	double p_h_given_f;
};

// Random-sampling baselines.
EstimateReport rs_pop(const Dataset &data, const EstimatorParams &params);
EstimateReport rs_cross(const Dataset &data, const EstimatorParams &params);

/// Collision-model probabilities for f(s) = s^k with the similarity uniform on [0, 1].
/// tau is an angular threshold in [0, 1].
ConditionalProbs closed_form_probs(double tau_ang, int k);

/// (N_H - M P(H|F)) / (P(H|T) - P(H|F)), unclamped.
double join_size_from_probs(double n_h, double total_pairs, const ConditionalProbs &probs);

/// ((k+1) N_H - tau^k M) / sum_{i<k} tau^i, unclamped.
double uniform_join_size(double n_h, double total_pairs, double tau_ang, int k);

/// Uniformity-assumption estimate for one table, clamped to [0, M].
double j_uniform(const LshTable &table, const Dataset &data, double tau_ang);
EstimateReport j_uniform_report(const LshTable &table, const Dataset &data, const EstimatorParams &params);

/// Sample-weighted conditional probabilities plugged into the N_H identity.
EstimateReport lsh_s(const LshTable &table, const Dataset &data, const EstimatorParams &params);

/// Uniform sampling inside the same-bucket stratum.
SampleHResult sample_h(const LshTable &table, const Dataset &data, const ResolvedParams &params, Rng &rng);
/// Adaptive sampling in the cross-bucket stratum with the safe-lower-bound exit.
SampleLResult sample_l(const LshTable &table, const Dataset &data, const ResolvedParams &params, Rng &rng);

EstimateReport lsh_ss(const LshTable &table, const Dataset &data, const EstimatorParams &params);
/// Requires a single-table index.
EstimateReport lsh_ss(const LshIndex &index, const Dataset &data, const EstimatorParams &params);
/// Runs lsh_ss per table and returns the lower median.
EstimateReport lsh_ss_median(const LshIndex &index, const Dataset &data, const EstimatorParams &params);
/// Strata defined by sharing a bucket in any table.
EstimateReport lsh_ss_virtual(const LshIndex &index, const Dataset &data, const EstimatorParams &params);

/// Exact number of pairs sharing a bucket in at least one table (O(n^2 ell)).
std::uint64_t virtual_same_bucket_pairs(const LshIndex &index);

/// Lower-middle element; the input must be non-empty.
double lower_median(std::vector<double> values);

enum class EstimatorKind { rs_pop, rs_cross, j_uniform, lsh_s, lsh_ss, lsh_ss_d, lsh_ss_median, lsh_ss_virtual };

EstimatorKind parse_estimator(std::string_view name);
std::string_view estimator_name(EstimatorKind kind);
const std::vector<EstimatorKind> &all_estimators();

EstimateReport run_estimator(EstimatorKind kind, const LshIndex &index, const Dataset &data,
                             const EstimatorParams &params);

} // namespace vsj
