#include "vsj/bench.hpp"

#include "vsj/error.hpp"
#include "vsj/general_join.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>

namespace vsj {

void BenchConfig::validate() const {
	if (trials < 1) {
		throw InvalidInput("trials must be at least 1");
	}
	if (taus.empty()) {
		throw InvalidInput("need at least one threshold");
	}
	for (std::size_t i = 0; i < taus.size(); ++i) {
		if (!(taus[i] > 0.0 && taus[i] <= 1.0)) {
			throw InvalidInput("thresholds must lie in (0, 1]");
		}
		if (i > 0 && !(taus[i] > taus[i - 1])) {
			throw InvalidInput("thresholds must be strictly ascending");
		}
	}
	if (estimators.empty()) {
		throw InvalidInput("no estimators selected");
	}
}

const CellSummary &BenchResult::cell(std::string_view estimator, double tau) const {
	for (const auto &c : cells) {
		if (c.estimator == estimator && c.tau == tau) {
			return c;
		}
	}
	throw InvalidInput("no bench cell for " + std::string(estimator));
}

CellSummary summarize(std::string estimator, double tau, std::uint64_t oracle_j, std::span<const TrialRecord> trials) {
	CellSummary s;
	s.estimator = std::move(estimator);
	s.tau = tau;
	s.trials = trials.size();
	s.oracle_j = oracle_j;
	s.zero_j = oracle_j == 0;
	const double j = static_cast<double>(oracle_j);
	double sum = 0.0;
	double over_sum = 0.0;
	double under_sum = 0.0;
	double runtime = 0.0;
	std::uint64_t safe = 0;
	for (const auto &t : trials) {
		double est = t.report.j_hat;
		sum += est;
		runtime += t.runtime_ms;
		safe += t.report.safe_lower_bound ? 1 : 0;
		if (est > j) {
			++s.over;
			if (!s.zero_j) {
				over_sum += (est - j) / j;
				s.big_over += est / j >= 10.0 ? 1 : 0;
			}
		} else if (est < j) {
			++s.under;
			under_sum += (est - j) / j;
			s.big_under += (est == 0.0 || j / est >= 10.0) ? 1 : 0;
		} else {
			++s.exact;
		}
	}
	const double count = static_cast<double>(trials.size());
	s.mean_j_hat = sum / count;
	double squares = 0.0;
	for (const auto &t : trials) {
		double d = t.report.j_hat - s.mean_j_hat;
		squares += d * d;
	}
	s.std = std::sqrt(squares / count);
	s.mean_runtime_ms = runtime / count;
	s.safe_lb_frac = static_cast<double>(safe) / count;
	if (s.zero_j) {
		s.mean_over_err = std::numeric_limits<double>::quiet_NaN();
		s.mean_under_err = std::numeric_limits<double>::quiet_NaN();
	} else {
		s.mean_over_err = s.over ? over_sum / static_cast<double>(s.over) : 0.0;
		s.mean_under_err = s.under ? under_sum / static_cast<double>(s.under) : 0.0;
	}
	return s;
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
	return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Runs every (estimator, tau, trial) cell through `estimate` and aggregates.
template <class Estimate>
BenchResult sweep(const BenchConfig &config, const std::vector<std::uint64_t> &oracle, Estimate &&estimate) {
	BenchResult result;
	for (auto kind : config.estimators) {
		for (std::size_t ti = 0; ti < config.taus.size(); ++ti) {
			const double tau = config.taus[ti];
			std::vector<TrialRecord> cell;
			cell.reserve(config.trials);
			for (std::uint64_t t = 0; t < config.trials; ++t) {
				EstimatorParams params = config.params;
				params.tau_cos = tau;
				params.seed = config.base_seed + t;
				TrialRecord rec;
				rec.tau = tau;
				rec.trial = t;
				rec.seed = params.seed;
				auto start = Clock::now();
				rec.report = estimate(kind, params);
				rec.runtime_ms = config.timing ? elapsed_ms(start) : 0.0;
				rec.estimator = std::string(estimator_name(kind));
				rec.ratio = oracle[ti] == 0 ? std::numeric_limits<double>::quiet_NaN()
				                            : rec.report.j_hat / static_cast<double>(oracle[ti]);
				cell.push_back(std::move(rec));
			}
			result.cells.push_back(summarize(std::string(estimator_name(kind)), tau, oracle[ti], cell));
			for (auto &rec : cell) {
				result.trials.push_back(std::move(rec));
			}
		}
	}
	return result;
}

} // namespace

BenchResult run_sweep(const Dataset &data, const BenchConfig &config) {
	config.validate();
	auto start = Clock::now();
	auto index = LshIndex::build(data, HashFamily{config.k, config.ell, config.base_seed});
	double build_ms = config.timing ? elapsed_ms(start) : 0.0;
	auto result = run_sweep(data, index, config);
	result.index_build_ms = build_ms;
	return result;
}

BenchResult run_sweep(const Dataset &data, const LshIndex &index, const BenchConfig &config) {
	config.validate();
	auto oracle = exact_join_sizes(data, config.taus, config.exact_limit);
	return sweep(config, oracle, [&](EstimatorKind kind, const EstimatorParams &params) {
		return run_estimator(kind, index, data, params);
	});
}

BenchResult run_general_sweep(const Dataset &left, const Dataset &right, const BenchConfig &config) {
	config.validate();
	for (auto kind : config.estimators) {
		if (kind != EstimatorKind::lsh_ss && kind != EstimatorKind::rs_pop) {
			throw InvalidInput("general joins support lsh_ss and rs_pop only");
		}
	}
	auto start = Clock::now();
	auto index = GeneralJoinIndex::build(left, right, HashFamily{config.k, 1, config.base_seed});
	double build_ms = config.timing ? elapsed_ms(start) : 0.0;
	std::vector<std::uint64_t> oracle;
	for (double tau : config.taus) {
		oracle.push_back(exact_cross_join_size(left, right, tau, config.exact_limit));
	}
	auto result = sweep(config, oracle, [&](EstimatorKind kind, const EstimatorParams &params) {
		return kind == EstimatorKind::lsh_ss ? general_lsh_ss(index, left, right, params)
		                                     : general_rs_pop(left, right, params);
	});
	result.index_build_ms = build_ms;
	return result;
}

namespace {

void write_summary_row(std::ostream &out, const CellSummary &c) {
	out << c.estimator << ',' << format_double(c.tau) << ',' << c.trials << ',' << format_double(c.mean_over_err)
	    << ',' << format_double(c.mean_under_err) << ',' << format_double(c.std) << ','
	    << format_double(c.mean_runtime_ms) << ',' << c.big_over << ',' << c.big_under << ','
	    << format_double(c.safe_lb_frac) << ',' << c.oracle_j << ',' << format_double(c.mean_j_hat) << '\n';
}

constexpr const char *kSummaryHeader =
    "estimator,tau,trials,mean_over_err,mean_under_err,std,mean_runtime_ms,big_over,big_under,safe_lb_frac,"
    "oracle_J,mean_j_hat";

} // namespace

void write_summary_csv(std::ostream &out, const BenchResult &result) {
	out << kSummaryHeader << '\n';
	for (const auto &c : result.cells) {
		write_summary_row(out, c);
	}
}

void write_trial_csv(std::ostream &out, const BenchResult &result) {
	out << "estimator,tau,trial,seed,j_hat,j_h_hat,j_l_hat,safe,samples,sim_evals,ratio\n";
	auto opt = [](const std::optional<double> &v) { return v ? format_double(*v) : std::string(); };
	for (const auto &t : result.trials) {
		out << t.estimator << ',' << format_double(t.tau) << ',' << t.trial << ',' << t.seed << ','
		    << format_double(t.report.j_hat) << ',' << opt(t.report.j_h_hat) << ',' << opt(t.report.j_l_hat) << ','
		    << (t.report.safe_lower_bound ? 1 : 0) << ',' << t.report.samples_used << ',' << t.report.sim_evals
		    << ',' << format_double(t.ratio) << '\n';
	}
}

StudyAxis parse_study_axis(std::string_view name) {
	if (name == "delta") {
		return StudyAxis::delta;
	}
	if (name == "m") {
		return StudyAxis::m;
	}
	if (name == "c_s" || name == "cs") {
		return StudyAxis::c_s;
	}
	if (name == "k") {
		return StudyAxis::k;
	}
	throw InvalidInput("unknown study axis '" + std::string(name) + "'");
}

std::string_view study_axis_name(StudyAxis axis) {
	switch (axis) {
	case StudyAxis::delta:
		return "delta";
	case StudyAxis::m:
		return "m";
	case StudyAxis::c_s:
		return "c_s";
	case StudyAxis::k:
		return "k";
	}
	return "delta";
}

std::vector<double> delta_grid(std::uint64_t n) {
	double log_n = static_cast<double>(log2_ceil(n));
	return {std::ceil(0.5 * log_n), log_n, 2.0 * log_n, std::ceil(std::sqrt(static_cast<double>(n)))};
}

std::vector<double> sample_size_grid(std::uint64_t n) {
	double nd = static_cast<double>(n);
	double log_n = static_cast<double>(log2_ceil(n));
	return {std::ceil(std::sqrt(nd)), std::ceil(nd / log_n), std::ceil(0.5 * nd), nd, 2.0 * nd,
	        std::ceil(nd * log_n)};
}

std::vector<StudyPoint> parameter_study(const Dataset &data, StudyAxis axis, std::span<const double> values,
                                        const BenchConfig &config) {
	config.validate();
	std::vector<StudyPoint> points;
	std::optional<LshIndex> shared;
	if (axis != StudyAxis::k) {
		shared = LshIndex::build(data, HashFamily{config.k, config.ell, config.base_seed});
	}
	for (double value : values) {
		if (!(value > 0.0)) {
			throw InvalidInput("study values must be positive");
		}
		BenchConfig c = config;
		auto rounded = static_cast<std::uint64_t>(std::ceil(value));
		switch (axis) {
		case StudyAxis::delta:
			c.params.delta = rounded;
			break;
		case StudyAxis::m:
			c.params.m_h = rounded;
			c.params.m_l = rounded;
			c.params.m_r = static_cast<std::uint64_t>(std::ceil(1.5 * value));
			break;
		case StudyAxis::c_s:
			c.params.dampening = Dampening{DampeningKind::fixed, value};
			break;
		case StudyAxis::k:
			c.k = static_cast<int>(rounded);
			break;
		}
		StudyPoint point;
		point.value = value;
		point.result = axis == StudyAxis::k ? run_sweep(data, c) : run_sweep(data, *shared, c);
		points.push_back(std::move(point));
	}
	return points;
}

void write_study_csv(std::ostream &out, StudyAxis axis, std::span<const StudyPoint> points) {
	out << "axis,value," << kSummaryHeader << '\n';
	for (const auto &p : points) {
		for (const auto &c : p.result.cells) {
			out << study_axis_name(axis) << ',' << format_double(p.value) << ',';
			write_summary_row(out, c);
		}
	}
}

} // namespace vsj
