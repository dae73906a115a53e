// vsj_cli: similarity join size estimation from the command line.
//
//   vsj_cli gen      --out corpus.txt [--n 2000 --clusters 40 ...]
//   vsj_cli index    --input corpus.txt [--k 20 --ell 1 --out index.txt]
//   vsj_cli estimate --input corpus.txt --est lsh_ss --tau 0.9
//   vsj_cli oracle   --input corpus.txt --taus 0.1,0.5,0.9
//   vsj_cli bench    --input corpus.txt --est lsh_ss,rs_pop --out summary.csv
//   vsj_cli study    --input corpus.txt --axis delta --out study.csv
//
// Exit codes: 0 success, 2 invalid input, 3 oracle refusal.

#include "vsj/bench.hpp"
#include "vsj/error.hpp"
#include "vsj/general_join.hpp"
#include "vsj/index_snapshot.hpp"
#include "vsj/synthetic.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitRefused = 3;

struct CommonFlags {
	std::string input;
	std::string input2;
	std::string index_file;
	std::string out;
	int k = 20;
	int ell = 1;
	std::uint64_t seed = 0;
	std::uint64_t exact_limit = vsj::kDefaultExactLimit;
	bool virtual_buckets = false;
};

struct SamplingFlags {
	std::optional<std::uint64_t> m_h;
	std::optional<std::uint64_t> m_l;
	std::optional<std::uint64_t> delta;
	std::optional<std::uint64_t> m_r;
	std::string cs = "none";
	bool count_rejected = false;
	bool delta_preset = false;
};

void add_input_flags(CLI::App *cmd, CommonFlags &f) {
	cmd->add_option("--input", f.input, "sparse vector file")->required();
	cmd->add_option("--input2", f.input2, "second collection for a general join");
}

void add_index_flags(CLI::App *cmd, CommonFlags &f) {
	cmd->add_option("--k", f.k, "hash functions per table")->capture_default_str();
	cmd->add_option("--ell", f.ell, "number of tables")->capture_default_str();
	cmd->add_option("--seed", f.seed, "seed for the hash family and all sampling")->capture_default_str();
	cmd->add_option("--index", f.index_file, "load an index snapshot instead of building one");
}

void add_sampling_flags(CLI::App *cmd, SamplingFlags &s) {
	cmd->add_option("--mh", s.m_h, "SampleH size (default n)");
	cmd->add_option("--ml", s.m_l, "SampleL budget (default n)");
	cmd->add_option("--delta", s.delta, "answer-size threshold (default ceil(log2 n))");
	cmd->add_option("--mr", s.m_r, "baseline sample size (default 1.5 n)");
	cmd->add_option("--cs", s.cs, "dampening: none | adaptive | <value in (0,1]>")->capture_default_str();
	cmd->add_flag("--count-rejected", s.count_rejected, "count same-bucket rejections against m_L");
	cmd->add_flag("--delta-preset", s.delta_preset, "threshold-dependent delta when --delta is unset");
}

vsj::EstimatorParams to_params(const SamplingFlags &s) {
	vsj::EstimatorParams p;
	p.m_h = s.m_h;
	p.m_l = s.m_l;
	p.delta = s.delta;
	p.m_r = s.m_r;
	p.dampening = vsj::Dampening::parse(s.cs);
	p.count_rejected = s.count_rejected;
	p.threshold_delta_preset = s.delta_preset;
	return p;
}

vsj::LshIndex obtain_index(const CommonFlags &f, const vsj::Dataset &data) {
	if (!f.index_file.empty()) {
		auto index = vsj::load_index(f.index_file);
		if (index.vector_count() != data.size()) {
			throw vsj::InvalidInput("index snapshot does not match the input size");
		}
		return index;
	}
	return vsj::LshIndex::build(data, vsj::HashFamily{f.k, f.ell, f.seed});
}

// Writes to --out when given, otherwise to stdout.
void emit(const std::string &out_path, const std::string &text) {
	if (out_path.empty()) {
		std::cout << text;
		return;
	}
	std::ofstream out(out_path, std::ios::binary);
	if (!out) {
		throw vsj::InvalidInput("cannot write " + out_path);
	}
	out << text;
}

std::vector<vsj::EstimatorKind> parse_estimators(const std::vector<std::string> &names) {
	std::vector<vsj::EstimatorKind> kinds;
	for (const auto &n : names) {
		kinds.push_back(vsj::parse_estimator(n));
	}
	return kinds;
}

int cmd_gen(const vsj::SyntheticSpec &spec, const std::string &out) {
	auto corpus = vsj::generate_corpus(spec);
	vsj::save_sparse_vectors(out, corpus.data);
	std::ofstream manifest(out + ".manifest", std::ios::binary);
	if (!manifest) {
		throw vsj::InvalidInput("cannot write " + out + ".manifest");
	}
	vsj::write_manifest(manifest, spec, corpus);
	std::cout << "wrote " << corpus.data.size() << " vectors to " << out << '\n';
	return 0;
}

int cmd_index(const CommonFlags &f) {
	auto data = vsj::load_sparse_vectors(f.input);
	auto index = obtain_index(f, data);
	std::ostringstream text;
	text << "n=" << data.size() << '\n' << "tables=" << index.table_count() << '\n';
	for (std::size_t t = 0; t < index.table_count(); ++t) {
		const auto &table = index.table(t);
		text << "table=" << t << " k=" << table.spec().k << " n_g=" << table.bucket_count()
		     << " N_H=" << table.same_bucket_pairs() << " histogram=";
		bool first = true;
		for (const auto &[size, count] : table.size_histogram()) {
			text << (first ? "" : ",") << size << ':' << count;
			first = false;
		}
		text << '\n';
	}
	std::cout << text.str();
	if (!f.out.empty()) {
		vsj::save_index(f.out, index);
	}
	return 0;
}

int cmd_estimate(const CommonFlags &f, const SamplingFlags &s, const std::string &est, double tau) {
	auto data = vsj::load_sparse_vectors(f.input);
	auto params = to_params(s);
	params.tau_cos = tau;
	params.seed = f.seed;
	vsj::EstimateReport report;
	if (!f.input2.empty()) {
		auto right = vsj::load_sparse_vectors(f.input2);
		if (est == "lsh_ss") {
			auto index = vsj::GeneralJoinIndex::build(data, right, vsj::HashFamily{f.k, 1, f.seed});
			report = vsj::general_lsh_ss(index, data, right, params);
		} else if (est == "rs_pop") {
			report = vsj::general_rs_pop(data, right, params);
		} else {
			throw vsj::InvalidInput("general joins support --est lsh_ss or rs_pop");
		}
	} else {
		auto kind = vsj::parse_estimator(est);
		if (f.virtual_buckets && kind == vsj::EstimatorKind::lsh_ss) {
			kind = vsj::EstimatorKind::lsh_ss_virtual;
		}
		auto index = obtain_index(f, data);
		report = vsj::run_estimator(kind, index, data, params);
	}
	emit(f.out, vsj::format_report(report));
	if (!f.out.empty()) {
		std::cout << vsj::format_report(report);
	}
	return 0;
}

int cmd_oracle(const CommonFlags &f, std::vector<double> taus) {
	auto data = vsj::load_sparse_vectors(f.input);
	std::ostringstream text;
	if (!f.input2.empty()) {
		auto right = vsj::load_sparse_vectors(f.input2);
		text << "tau,J\n";
		for (double tau : taus) {
			text << vsj::format_double(tau) << ',' << vsj::exact_cross_join_size(data, right, tau, f.exact_limit)
			     << '\n';
		}
	} else {
		if (f.exact_limit < data.size()) {
			throw vsj::OracleRefusal("exact oracle refuses n = " + std::to_string(data.size()));
		}
		auto index = obtain_index(f, data);
		auto profiles = vsj::profile_sweep(index, data, taus, f.virtual_buckets, f.exact_limit);
		vsj::write_profile_csv(text, profiles);
	}
	emit(f.out, text.str());
	return 0;
}

vsj::BenchConfig bench_config(const CommonFlags &f, const SamplingFlags &s, const std::vector<std::string> &est,
                              const std::vector<double> &taus, std::uint64_t trials, bool timing) {
	vsj::BenchConfig c;
	c.estimators = parse_estimators(est);
	c.taus = taus;
	c.trials = trials;
	c.params = to_params(s);
	c.k = f.k;
	c.ell = f.ell;
	c.base_seed = f.seed;
	c.exact_limit = f.exact_limit;
	c.timing = timing;
	return c;
}

void write_bench_outputs(const std::string &out, const std::string &trial_log, const vsj::BenchResult &result) {
	std::ostringstream summary;
	vsj::write_summary_csv(summary, result);
	emit(out, summary.str());
	std::string log_path = !trial_log.empty() ? trial_log : (out.empty() ? std::string() : out + ".trials.csv");
	if (!log_path.empty()) {
		std::ostringstream trials;
		vsj::write_trial_csv(trials, result);
		emit(log_path, trials.str());
	}
}

int cmd_bench(const CommonFlags &f, const vsj::BenchConfig &config, const std::string &trial_log) {
	auto data = vsj::load_sparse_vectors(f.input);
	vsj::BenchResult result;
	if (!f.input2.empty()) {
		result = vsj::run_general_sweep(data, vsj::load_sparse_vectors(f.input2), config);
	} else if (!f.index_file.empty()) {
		result = vsj::run_sweep(data, obtain_index(f, data), config);
	} else {
		result = vsj::run_sweep(data, config);
	}
	write_bench_outputs(f.out, trial_log, result);
	if (config.timing) {
		std::cerr << "index_build_ms=" << result.index_build_ms << '\n';
	}
	return 0;
}

int cmd_study(const CommonFlags &f, const vsj::BenchConfig &config, const std::string &axis_name,
              std::vector<double> values) {
	auto data = vsj::load_sparse_vectors(f.input);
	auto axis = vsj::parse_study_axis(axis_name);
	if (values.empty()) {
		switch (axis) {
		case vsj::StudyAxis::delta:
			values = vsj::delta_grid(data.size());
			break;
		case vsj::StudyAxis::m:
			values = vsj::sample_size_grid(data.size());
			break;
		case vsj::StudyAxis::c_s:
			values = {0.1, 0.5, 1.0};
			break;
		case vsj::StudyAxis::k:
			values = {5, 10, 15, 20, 30};
			break;
		}
	}
	auto points = vsj::parameter_study(data, axis, values, config);
	std::ostringstream text;
	vsj::write_study_csv(text, axis, points);
	emit(f.out, text.str());
	return 0;
}

} // namespace

int main(int argc, char **argv) {
	CLI::App app{"Vector similarity join size estimation with LSH"};
	app.require_subcommand(1);

	CommonFlags common;
	SamplingFlags sampling;
	std::string est = "lsh_ss";
	std::vector<std::string> est_list = {"lsh_ss"};
	double tau = 0.5;
	std::vector<double> taus = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
	std::uint64_t trials = 100;
	bool timing = false;
	std::string trial_log;
	std::string axis = "delta";
	std::vector<double> values;
	vsj::SyntheticSpec spec;
	std::string gen_out;

	auto *gen = app.add_subcommand("gen", "write a synthetic planted-cluster corpus");
	gen->add_option("--out", gen_out, "output vector file (a .manifest is written alongside)")->required();
	gen->add_option("--n", spec.n)->capture_default_str();
	gen->add_option("--dims", spec.dims)->capture_default_str();
	gen->add_option("--clusters", spec.cluster_count)->capture_default_str();
	gen->add_option("--cluster-size", spec.cluster_size)->capture_default_str();
	gen->add_option("--noise", spec.noise)->capture_default_str();
	gen->add_option("--topics", spec.topics)->capture_default_str();
	gen->add_option("--topic-vocab", spec.topic_vocab)->capture_default_str();
	gen->add_option("--topic-mix", spec.topic_mix)->capture_default_str();
	gen->add_option("--min-nnz", spec.min_nnz)->capture_default_str();
	gen->add_option("--max-nnz", spec.max_nnz)->capture_default_str();
	gen->add_option("--seed", spec.seed)->capture_default_str();

	auto *index = app.add_subcommand("index", "build an index and print bucket statistics");
	add_input_flags(index, common);
	add_index_flags(index, common);
	index->add_option("--out", common.out, "write an index snapshot");

	auto *estimate = app.add_subcommand("estimate", "run one estimator at one threshold");
	add_input_flags(estimate, common);
	add_index_flags(estimate, common);
	add_sampling_flags(estimate, sampling);
	estimate->add_option("--est", est, "estimator name")->capture_default_str();
	estimate->add_option("--tau", tau, "cosine threshold in (0, 1]")->capture_default_str();
	estimate->add_flag("--virtual", common.virtual_buckets, "lsh_ss over virtual buckets of all tables");
	estimate->add_option("--out", common.out, "also write the report here");

	auto *oracle = app.add_subcommand("oracle", "exact join sizes and stratum probabilities as CSV");
	add_input_flags(oracle, common);
	add_index_flags(oracle, common);
	oracle->add_option("--tau", tau, "single threshold")->excludes(oracle->add_option("--taus", taus)->delimiter(','));
	oracle->add_flag("--virtual", common.virtual_buckets, "strata from any-table collisions");
	oracle->add_option("--exact-limit", common.exact_limit)->capture_default_str();
	oracle->add_option("--out", common.out, "CSV output (default stdout)");

	auto add_bench_flags = [&](CLI::App *cmd) {
		add_input_flags(cmd, common);
		add_index_flags(cmd, common);
		add_sampling_flags(cmd, sampling);
		cmd->add_option("--est", est_list, "estimators")->delimiter(',');
		cmd->add_option("--taus", taus, "ascending thresholds")->delimiter(',');
		cmd->add_option("--trials", trials)->capture_default_str();
		cmd->add_option("--exact-limit", common.exact_limit)->capture_default_str();
		cmd->add_option("--out", common.out, "summary CSV (default stdout)");
		cmd->add_option("--trial-log", trial_log, "per-trial CSV (default <out>.trials.csv)");
		cmd->add_flag("--timing", timing, "record wall-clock runtimes (output no longer reproducible)");
	};
	auto *bench = app.add_subcommand("bench", "threshold sweep over repeated trials");
	add_bench_flags(bench);
	auto *study = app.add_subcommand("study", "parameter study: one sweep per axis value");
	add_bench_flags(study);
	study->add_option("--axis", axis, "delta | m | c_s | k")->capture_default_str();
	study->add_option("--values", values, "axis values (default: the standard grid)")->delimiter(',');

	try {
		app.parse(argc, argv);
	} catch (const CLI::ParseError &e) {
		int code = app.exit(e);
		return code == 0 ? 0 : kExitInvalid;
	}

	try {
		if (oracle->parsed() && oracle->count("--tau") > 0) {
			taus = {tau};
		}
		if (gen->parsed()) {
			return cmd_gen(spec, gen_out);
		}
		if (index->parsed()) {
			return cmd_index(common);
		}
		if (estimate->parsed()) {
			return cmd_estimate(common, sampling, est, tau);
		}
		if (oracle->parsed()) {
			return cmd_oracle(common, taus);
		}
		auto config = bench_config(common, sampling, est_list, taus, trials, timing);
		if (bench->parsed()) {
			return cmd_bench(common, config, trial_log);
		}
		if (study->parsed()) {
			return cmd_study(common, config, axis, values);
		}
	} catch (const vsj::OracleRefusal &e) {
		std::cerr << "oracle refused: " << e.what() << '\n';
		return kExitRefused;
	} catch (const vsj::InvalidInput &e) {
		std::cerr << "invalid input: " << e.what() << '\n';
		return kExitInvalid;
	} catch (const std::exception &e) {
		std::cerr << "error: " << e.what() << '\n';
		return 1;
	}
	return 0;
}
