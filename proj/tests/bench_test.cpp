#include "vsj/bench.hpp"
#include "vsj/error.hpp"
#include "vsj/synthetic.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <sstream>

using namespace vsj;

namespace {

const Dataset &planted() {
	static const Dataset d = generate_corpus(SyntheticSpec{.n = 500, .cluster_count = 25, .cluster_size = 6, .seed = 4}).data;
	return d;
}

TrialRecord record(double j_hat, std::uint64_t j) {
	TrialRecord r;
	r.estimator = "fixed";
	r.report.j_hat = j_hat;
	r.ratio = j > 0 ? j_hat / static_cast<double>(j) : NAN;
	return r;
}

std::vector<std::string> split(const std::string &line) {
	std::vector<std::string> out;
	std::stringstream s(line);
	std::string f;
	while (std::getline(s, f, ',')) {
		out.push_back(f);
	}
	return out;
}

} // namespace

TEST(Summarize, ExactEstimator) {
	std::vector<TrialRecord> trials(10, record(50, 50));
	auto c = summarize("fixed", 0.5, 50, trials);
	EXPECT_EQ(c.exact, 10u);
	EXPECT_EQ(c.mean_over_err, 0.0);
	EXPECT_EQ(c.mean_under_err, 0.0);
	EXPECT_EQ(c.std, 0.0);
	EXPECT_EQ(c.big_over + c.big_under, 0u);
}

TEST(Summarize, ZeroEstimator) {
	std::vector<TrialRecord> trials(7, record(0, 50));
	auto c = summarize("fixed", 0.5, 50, trials);
	EXPECT_DOUBLE_EQ(c.mean_under_err, -1.0);
	EXPECT_EQ(c.big_under, 7u);
	EXPECT_EQ(c.under, 7u);
}

TEST(Summarize, MixedPartitionsAndBigErrors) {
	std::vector<TrialRecord> trials = {record(100, 10), record(5, 10), record(10, 10), record(1, 10), record(30, 10)};
	auto c = summarize("fixed", 0.5, 10, trials);
	EXPECT_EQ(c.over + c.under + c.exact, 5u);
	EXPECT_EQ(c.over, 2u);
	EXPECT_EQ(c.under, 2u);
	EXPECT_EQ(c.big_over, 1u);
	EXPECT_EQ(c.big_under, 1u);
	EXPECT_DOUBLE_EQ(c.mean_over_err, (9.0 + 2.0) / 2);
	EXPECT_DOUBLE_EQ(c.mean_under_err, (-0.5 - 0.9) / 2);
	double mean = (100 + 5 + 10 + 1 + 30) / 5.0;
	double var = 0;
	for (double x : {100.0, 5.0, 10.0, 1.0, 30.0}) {
		var += (x - mean) * (x - mean);
	}
	EXPECT_NEAR(c.std, std::sqrt(var / 5), 1e-12);
}

TEST(Summarize, ZeroTruthLeavesErrorsUndefined) {
	std::vector<TrialRecord> trials(3, record(4, 0));
	auto c = summarize("fixed", 0.9, 0, trials);
	EXPECT_TRUE(c.zero_j);
	EXPECT_TRUE(std::isnan(c.mean_over_err));
	EXPECT_TRUE(std::isnan(c.mean_under_err));
	EXPECT_DOUBLE_EQ(c.mean_j_hat, 4.0);
}

TEST(BenchConfig, Validation) {
	BenchConfig c;
	c.trials = 0;
	EXPECT_THROW(c.validate(), InvalidInput);
	c.trials = 1;
	c.taus = {0.5, 0.5};
	EXPECT_THROW(c.validate(), InvalidInput);
	c.taus = {0.0, 0.5};
	EXPECT_THROW(c.validate(), InvalidInput);
	c.taus = {0.5};
	c.estimators.clear();
	EXPECT_THROW(c.validate(), InvalidInput);
}

TEST(RunSweep, SeedsAndShape) {
	BenchConfig c;
	c.estimators = {EstimatorKind::lsh_ss, EstimatorKind::rs_pop};
	c.taus = {0.3, 0.8};
	c.trials = 4;
	c.base_seed = 10;
	auto r = run_sweep(planted(), c);
	EXPECT_EQ(r.cells.size(), 4u);
	EXPECT_EQ(r.trials.size(), 16u);
	for (const auto &t : r.trials) {
		EXPECT_EQ(t.seed, 10 + t.trial);
		EXPECT_EQ(t.runtime_ms, 0.0);
	}
	EXPECT_EQ(r.cell("rs_pop", 0.8).oracle_j, exact_join_size(planted(), 0.8));
	EXPECT_THROW(r.cell("lsh_s", 0.8), InvalidInput);
}

TEST(RunSweep, ReproducibleCsv) {
	BenchConfig c;
	c.estimators = {EstimatorKind::lsh_ss, EstimatorKind::j_uniform, EstimatorKind::lsh_s};
	c.trials = 5;
	std::ostringstream a, b, ta, tb;
	auto r1 = run_sweep(planted(), c);
	auto r2 = run_sweep(planted(), c);
	write_summary_csv(a, r1);
	write_summary_csv(b, r2);
	write_trial_csv(ta, r1);
	write_trial_csv(tb, r2);
	EXPECT_EQ(a.str(), b.str());
	EXPECT_EQ(ta.str(), tb.str());
	EXPECT_EQ(a.str().substr(0, a.str().find('\n')),
	          "estimator,tau,trials,mean_over_err,mean_under_err,std,mean_runtime_ms,big_over,big_under,safe_lb_frac,"
	          "oracle_J,mean_j_hat");
	EXPECT_EQ(ta.str().substr(0, ta.str().find('\n')),
	          "estimator,tau,trial,seed,j_hat,j_h_hat,j_l_hat,safe,samples,sim_evals,ratio");
}

TEST(RunSweep, SummaryRecomputesFromTrialLog) {
	BenchConfig c;
	c.estimators = {EstimatorKind::lsh_ss, EstimatorKind::rs_pop};
	c.taus = {0.2, 0.6, 0.9};
	c.trials = 20;
	auto r = run_sweep(planted(), c);
	std::ostringstream log;
	write_trial_csv(log, r);
	std::istringstream in(log.str());
	std::string line;
	std::getline(in, line);
	std::map<std::pair<std::string, std::string>, std::vector<double>> by_cell;
	while (std::getline(in, line)) {
		auto f = split(line);
		by_cell[{f[0], f[1]}].push_back(std::stod(f[4]));
	}
	for (const auto &cell : r.cells) {
		auto &xs = by_cell[{cell.estimator, format_double(cell.tau)}];
		ASSERT_EQ(xs.size(), cell.trials);
		double j = static_cast<double>(cell.oracle_j);
		double mean = 0, over = 0, under = 0;
		int n_over = 0, n_under = 0;
		for (double x : xs) {
			mean += x / xs.size();
			if (x > j) {
				over += (x - j) / j;
				++n_over;
			} else if (x < j) {
				under += (x - j) / j;
				++n_under;
			}
		}
		double var = 0;
		for (double x : xs) {
			var += (x - mean) * (x - mean) / xs.size();
		}
		EXPECT_NEAR(cell.mean_j_hat, mean, 1e-9 * std::max(1.0, mean));
		EXPECT_NEAR(cell.std, std::sqrt(var), 1e-9 * std::max(1.0, mean));
		EXPECT_NEAR(cell.mean_over_err, n_over ? over / n_over : 0.0, 1e-9);
		EXPECT_NEAR(cell.mean_under_err, n_under ? under / n_under : 0.0, 1e-9);
	}
}

TEST(StudyGrids, MirrorParameterFunctions) {
	EXPECT_EQ(delta_grid(1024), (std::vector<double>{5, 10, 20, 32}));
	EXPECT_EQ(sample_size_grid(1024), (std::vector<double>{32, 103, 512, 1024, 2048, 10240}));
	EXPECT_EQ(parse_study_axis("c_s"), StudyAxis::c_s);
	EXPECT_EQ(study_axis_name(StudyAxis::m), "m");
	EXPECT_THROW(parse_study_axis("zeta"), InvalidInput);
}

TEST(ParameterStudy, LargerDampeningOverestimatesMore) {
	auto data = generate_corpus(SyntheticSpec{.seed = 7}).data;
	BenchConfig c;
	c.taus = {0.1, 0.2};
	c.trials = 50;
	std::vector<double> values = {0.1, 1.0};
	auto points = parameter_study(data, StudyAxis::c_s, values, c);
	ASSERT_EQ(points.size(), 2u);
	auto over_mass = [](const StudyPoint &p) {
		double mass = 0;
		for (const auto &c : p.result.cells) {
			mass += c.mean_over_err * static_cast<double>(c.over);
		}
		return mass;
	};
	EXPECT_GT(over_mass(points[1]), over_mass(points[0]));
}

TEST(ParameterStudy, KAxisRebuildsIndex) {
	BenchConfig c;
	c.taus = {0.9};
	c.trials = 2;
	std::vector<double> values = {5, 20};
	auto points = parameter_study(planted(), StudyAxis::k, values, c);
	std::ostringstream out;
	write_study_csv(out, StudyAxis::k, points);
	auto text = out.str();
	EXPECT_EQ(text.substr(0, text.find(',')), "axis");
	EXPECT_NE(text.find("\nk,5,lsh_ss,0.9,"), std::string::npos);
	EXPECT_NE(text.find("\nk,20,lsh_ss,0.9,"), std::string::npos);
}

TEST(GeneralSweep, RunsCrossJoin) {
	auto corpus = generate_corpus(SyntheticSpec{.n = 200, .cluster_count = 10, .cluster_size = 4, .seed = 5}).data;
	BenchConfig c;
	c.estimators = {EstimatorKind::lsh_ss, EstimatorKind::rs_pop};
	c.taus = {0.5};
	c.trials = 3;
	auto r = run_general_sweep(corpus, corpus, c);
	EXPECT_EQ(r.cell("lsh_ss", 0.5).oracle_j, exact_cross_join_size(corpus, corpus, 0.5));
	c.estimators = {EstimatorKind::lsh_s};
	EXPECT_THROW(run_general_sweep(corpus, corpus, c), InvalidInput);
}
