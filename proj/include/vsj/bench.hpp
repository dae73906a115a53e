#pragma once

#include "vsj/estimators.hpp"
#include "vsj/oracle.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vsj {

/// Threshold sweep configuration. Trial t runs with seed base_seed + t; the
/// index hash family is seeded with base_seed.
struct BenchConfig {
	std::vector<EstimatorKind> estimators = {EstimatorKind::lsh_ss};
	std::vector<double> taus = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
	std::uint64_t trials = 100;
	/// Sample sizes, delta, dampening and flags; tau and seed are set per trial.
	EstimatorParams params;
	int k = 20;
	int ell = 1;
	std::uint64_t base_seed = 0;
	std::uint64_t exact_limit = kDefaultExactLimit;
	/// Wall-clock timing makes output machine-dependent; off keeps CSVs reproducible.
	bool timing = false;

	void validate() const;
};

struct TrialRecord {
	std::string estimator;
	double tau = 0.0;
	std::uint64_t trial = 0;
	std::uint64_t seed = 0;
	EstimateReport report;
	double runtime_ms = 0.0;
	/// j_hat / J, NaN when J = 0
	double ratio = 0.0;
};

struct CellSummary {
	std::string estimator;
	double tau = 0.0;
	std::uint64_t trials = 0;
	std::uint64_t oracle_j = 0;
	/// Mean of (j_hat - J)/J over trials with j_hat > J (resp. < J); 0 if none.
	double mean_over_err = 0.0;
	double mean_under_err = 0.0;
	/// Population standard deviation of j_hat.
	double std = 0.0;
	double mean_j_hat = 0.0;
	double mean_runtime_ms = 0.0;
	std::uint64_t over = 0;
	std::uint64_t under = 0;
	std::uint64_t exact = 0;
	/// j_hat/J >= 10 (resp. J/j_hat >= 10, including j_hat = 0)
	std::uint64_t big_over = 0;
	std::uint64_t big_under = 0;
	double safe_lb_frac = 0.0;
	/// J = 0: relative errors are undefined and left NaN.
	bool zero_j = false;
};

struct BenchResult {
	std::vector<CellSummary> cells;
	std::vector<TrialRecord> trials;
	double index_build_ms = 0.0;

	const CellSummary &cell(std::string_view estimator, double tau) const;
};

CellSummary summarize(std::string estimator, double tau, std::uint64_t oracle_j, std::span<const TrialRecord> trials);

BenchResult run_sweep(const Dataset &data, const BenchConfig &config);
BenchResult run_sweep(const Dataset &data, const LshIndex &index, const BenchConfig &config);
/// Cross join U x V; supports lsh_ss (general form) and rs_pop.
BenchResult run_general_sweep(const Dataset &left, const Dataset &right, const BenchConfig &config);

void write_summary_csv(std::ostream &out, const BenchResult &result);
void write_trial_csv(std::ostream &out, const BenchResult &result);

enum class StudyAxis { delta, m, c_s, k };

StudyAxis parse_study_axis(std::string_view name);
std::string_view study_axis_name(StudyAxis axis);

/// {0.5 log n, log n, 2 log n, sqrt n}, log base 2, rounded up.
std::vector<double> delta_grid(std::uint64_t n);
/// {sqrt n, n / log n, 0.5 n, n, 2 n, n log n}, rounded up.
std::vector<double> sample_size_grid(std::uint64_t n);

struct StudyPoint {
	double value = 0.0;
	BenchResult result;
};

/// One sweep per axis value. The m axis sets m_H = m_L = m and m_R = 1.5 m.
std::vector<StudyPoint> parameter_study(const Dataset &data, StudyAxis axis, std::span<const double> values,
                                        const BenchConfig &config);

void write_study_csv(std::ostream &out, StudyAxis axis, std::span<const StudyPoint> points);

} // namespace vsj
