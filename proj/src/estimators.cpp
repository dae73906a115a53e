#include "vsj/estimators.hpp"

#include "vsj/detail/stratum_sampling.hpp"
#include "vsj/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

namespace vsj {

namespace {

// Per-procedure RNG streams of one run.
enum Stream : std::uint64_t { kHighStream = 1, kLowStream = 2, kBaselineStream = 3, kLshSStream = 4 };

std::uint64_t isqrt_ceil(std::uint64_t x) {
	auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(x)));
	while (r * r > x) {
		--r;
	}
	while (r * r < x) {
		++r;
	}
	return r;
}

EstimateReport base_report(std::string name, const ResolvedParams &p, std::uint64_t total_pairs) {
	EstimateReport r;
	r.estimator = std::move(name);
	r.tau_cos = p.tau_cos;
	r.tau_ang = p.tau_ang;
	r.total_pairs = total_pairs;
	return r;
}

double clamp_to_pairs(double value, double total_pairs, bool &clamped) {
	double out = std::clamp(value, 0.0, total_pairs);
	clamped = clamped || out != value;
	return out;
}

auto cosine_predicate(const Dataset &data, double tau_cos) {
	return [&data, tau_cos](VectorId u, VectorId v) { return cosine(data[u], data[v]) >= tau_cos; };
}

void require_pairs(const Dataset &data, const char *who) {
	if (data.size() < 2) {
		throw InvalidInput(std::string(who) + " needs at least two vectors");
	}
}

void combine(EstimateReport &r, const SampleHResult &h, const SampleLResult &l, double n_l) {
	r.j_h_hat = h.j_h_hat;
	double j_l = l.j_l_hat;
	if (j_l > n_l) {
		j_l = n_l;
		r.clamped = true;
	}
	r.j_l_hat = j_l;
	r.j_hat = h.j_h_hat + j_l;
	r.n_true_sampled = h.n_true + l.n_true;
	r.samples_used = h.samples + l.samples;
	r.rejected = l.rejected;
	r.sim_evals = h.sim_evals + l.sim_evals;
	r.safe_lower_bound = l.safe;
}

} // namespace

Dampening Dampening::parse(std::string_view text) {
	if (text == "none") {
		return {DampeningKind::none, 1.0};
	}
	if (text == "adaptive") {
		return {DampeningKind::adaptive, 1.0};
	}
	double value = 0.0;
	auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
	if (ec != std::errc() || ptr != text.data() + text.size() || !(value > 0.0 && value <= 1.0)) {
		throw InvalidInput("dampening must be none, adaptive, or a value in (0, 1]");
	}
	return {DampeningKind::fixed, value};
}

std::string Dampening::to_string() const {
	switch (kind) {
	case DampeningKind::none:
		return "none";
	case DampeningKind::adaptive:
		return "adaptive";
	case DampeningKind::fixed:
		return format_double(factor);
	}
	return "none";
}

std::uint64_t log2_ceil(std::uint64_t n) {
	std::uint64_t bits = 0;
	while ((std::uint64_t{1} << bits) < n) {
		++bits;
	}
	return bits;
}

ResolvedParams resolve(const EstimatorParams &params, std::uint64_t n) {
	if (!(params.tau_cos > 0.0 && params.tau_cos <= 1.0)) {
		throw InvalidInput("cosine threshold must lie in (0, 1]");
	}
	ResolvedParams p{};
	p.tau_cos = params.tau_cos;
	p.tau_ang = threshold_to_angular(params.tau_cos);
	std::uint64_t base = std::max<std::uint64_t>(n, 1);
	p.m_h = params.m_h.value_or(base);
	p.m_l = params.m_l.value_or(base);
	p.m_r = params.m_r.value_or(static_cast<std::uint64_t>(std::ceil(1.5 * static_cast<double>(base))));
	double log_n = static_cast<double>(log2_ceil(base));
	if (params.delta) {
		p.delta = *params.delta;
	} else if (params.threshold_delta_preset && params.tau_cos >= 0.7) {
		p.delta = static_cast<std::uint64_t>(std::ceil(0.5 * log_n));
	} else if (params.threshold_delta_preset && params.tau_cos <= 0.3) {
		p.delta = static_cast<std::uint64_t>(std::ceil(2.0 * log_n));
	} else {
		p.delta = static_cast<std::uint64_t>(log_n);
	}
	p.delta = std::max<std::uint64_t>(p.delta, 1);
	if (!params.delta) {
		p.delta = std::min(p.delta, std::max<std::uint64_t>(p.m_l, 1));
	}
	p.dampening = params.dampening;
	p.seed = params.seed;
	p.count_rejected = params.count_rejected;
	p.virtual_exact_limit = params.virtual_exact_limit;
	if (p.m_h < 1 || p.m_l < 1 || p.m_r < 1) {
		throw InvalidInput("sample sizes must be positive");
	}
	if (p.delta < 1 || p.delta > p.m_l) {
		throw InvalidInput("delta must lie in [1, m_L]");
	}
	if (p.dampening.kind == DampeningKind::fixed && !(p.dampening.factor > 0.0 && p.dampening.factor <= 1.0)) {
		throw InvalidInput("fixed dampening factor must lie in (0, 1]");
	}
	return p;
}

std::string format_report(const EstimateReport &r) {
	std::ostringstream out;
	auto opt = [](const std::optional<double> &v) { return v ? format_double(*v) : std::string("na"); };
	out << "estimator=" << r.estimator << '\n'
	    << "j_hat=" << format_double(r.j_hat) << '\n'
	    << "j_h_hat=" << opt(r.j_h_hat) << '\n'
	    << "j_l_hat=" << opt(r.j_l_hat) << '\n'
	    << "n_true_sampled=" << r.n_true_sampled << '\n'
	    << "samples_used=" << r.samples_used << '\n'
	    << "rejected=" << r.rejected << '\n'
	    << "sim_evals=" << r.sim_evals << '\n'
	    << "safe_lower_bound=" << (r.safe_lower_bound ? 1 : 0) << '\n'
	    << "tau_cos=" << format_double(r.tau_cos) << '\n'
	    << "tau_ang=" << format_double(r.tau_ang) << '\n'
	    << "total_pairs=" << r.total_pairs << '\n'
	    << "n_h=" << opt(r.n_h) << '\n'
	    << "clamped=" << (r.clamped ? 1 : 0) << '\n'
	    << "degenerate=" << (r.degenerate ? 1 : 0) << '\n'
	    << "closed_form_fallback=" << (r.closed_form_fallback ? 1 : 0) << '\n'
	    << "n_h_estimated=" << (r.n_h_estimated ? 1 : 0) << '\n';
	out << "per_table=";
	for (std::size_t i = 0; i < r.per_table.size(); ++i) {
		out << (i ? "," : "") << format_double(r.per_table[i]);
	}
	out << '\n';
	return out.str();
}

EstimateReport rs_pop(const Dataset &data, const EstimatorParams &params) {
	require_pairs(data, "rs_pop");
	auto p = resolve(params, data.size());
	auto total = data.pair_count();
	auto r = base_report("rs_pop", p, total);
	Rng rng(derive_seed(p.seed, kBaselineStream));
	auto is_true = cosine_predicate(data, p.tau_cos);
	for (std::uint64_t i = 0; i < p.m_r; ++i) {
		auto [u, v] = draw_distinct_pair(rng, data.size());
		if (is_true(u, v)) {
			++r.n_true_sampled;
		}
	}
	r.samples_used = p.m_r;
	r.sim_evals = p.m_r;
	r.j_hat = static_cast<double>(r.n_true_sampled) * static_cast<double>(total) / static_cast<double>(p.m_r);
	return r;
}

EstimateReport rs_cross(const Dataset &data, const EstimatorParams &params) {
	require_pairs(data, "rs_cross");
	auto p = resolve(params, data.size());
	auto total = data.pair_count();
	auto r = base_report("rs_cross", p, total);
	std::uint64_t records = std::min<std::uint64_t>(isqrt_ceil(p.m_r), data.size());
	if (records < 2) {
		throw InvalidInput("rs_cross needs at least two sampled records (m_R >= 2)");
	}
	Rng rng(derive_seed(p.seed, kBaselineStream));
	std::vector<VectorId> ids(data.size());
	std::iota(ids.begin(), ids.end(), VectorId{0});
	for (std::uint64_t i = 0; i < records; ++i) {
		auto j = i + uniform_below(rng, ids.size() - i);
		std::swap(ids[i], ids[j]);
	}
	auto is_true = cosine_predicate(data, p.tau_cos);
	for (std::uint64_t a = 0; a < records; ++a) {
		for (std::uint64_t b = a + 1; b < records; ++b) {
			if (is_true(ids[a], ids[b])) {
				++r.n_true_sampled;
			}
		}
	}
	std::uint64_t compared = records * (records - 1) / 2;
	r.samples_used = compared;
	r.sim_evals = compared;
	r.j_hat = static_cast<double>(r.n_true_sampled) * static_cast<double>(total) / static_cast<double>(compared);
	return r;
}

ConditionalProbs closed_form_probs(double tau_ang, int k) {
	if (!(tau_ang >= 0.0 && tau_ang <= 1.0) || k < 1) {
		throw InvalidInput("closed_form_probs needs tau in [0, 1] and k >= 1");
	}
	double power = 1.0;
	double sum = 0.0;
	for (int i = 0; i <= k; ++i) {
		sum += power;
		if (i < k) {
			power *= tau_ang;
		}
	}
	double denom = static_cast<double>(k + 1);
	return {sum / denom, power / denom};
}

double join_size_from_probs(double n_h, double total_pairs, const ConditionalProbs &probs) {
	return (n_h - total_pairs * probs.p_h_given_f) / (probs.p_h_given_t - probs.p_h_given_f);
}

double uniform_join_size(double n_h, double total_pairs, double tau_ang, int k) {
	double power = 1.0;
	double denom = 0.0;
	for (int i = 0; i < k; ++i) {
		denom += power;
		power *= tau_ang;
	}
	return (static_cast<double>(k + 1) * n_h - power * total_pairs) / denom;
}

double j_uniform(const LshTable &table, const Dataset &data, double tau_ang) {
	bool clamped = false;
	auto total = static_cast<double>(data.pair_count());
	return clamp_to_pairs(
	    uniform_join_size(static_cast<double>(table.same_bucket_pairs()), total, tau_ang, table.spec().k), total,
	    clamped);
}

EstimateReport j_uniform_report(const LshTable &table, const Dataset &data, const EstimatorParams &params) {
	auto p = resolve(params, data.size());
	auto total = data.pair_count();
	auto r = base_report("j_uniform", p, total);
	r.n_h = static_cast<double>(table.same_bucket_pairs());
	double raw = uniform_join_size(*r.n_h, static_cast<double>(total), p.tau_ang, table.spec().k);
	r.j_hat = clamp_to_pairs(raw, static_cast<double>(total), r.clamped);
	return r;
}

EstimateReport lsh_s(const LshTable &table, const Dataset &data, const EstimatorParams &params) {
	require_pairs(data, "lsh_s");
	auto p = resolve(params, data.size());
	auto total = data.pair_count();
	auto r = base_report("lsh_s", p, total);
	r.n_h = static_cast<double>(table.same_bucket_pairs());
	const int k = table.spec().k;
	Rng rng(derive_seed(p.seed, kLshSStream));
	double true_weight = 0.0;
	double false_weight = 0.0;
	std::uint64_t true_count = 0;
	std::uint64_t false_count = 0;
	for (std::uint64_t i = 0; i < p.m_r; ++i) {
		auto [u, v] = draw_distinct_pair(rng, data.size());
		double c = cosine(data[u], data[v]);
		double s = std::pow(cosine_to_angular(c), k);
		if (c >= p.tau_cos) {
			true_weight += s;
			++true_count;
		} else {
			false_weight += s;
			++false_count;
		}
	}
	r.samples_used = p.m_r;
	r.sim_evals = p.m_r;
	r.n_true_sampled = true_count;
	auto closed = closed_form_probs(p.tau_ang, k);
	ConditionalProbs probs = closed;
	if (true_count > 0) {
		probs.p_h_given_t = true_weight / static_cast<double>(true_count);
	} else {
		r.closed_form_fallback = true;
	}
	if (false_count > 0) {
		probs.p_h_given_f = false_weight / static_cast<double>(false_count);
	} else {
		r.closed_form_fallback = true;
	}
	if (!(probs.p_h_given_t > probs.p_h_given_f)) {
		r.degenerate = true;
		r.j_hat = 0.0;
		return r;
	}
	r.j_hat = clamp_to_pairs(join_size_from_probs(*r.n_h, static_cast<double>(total), probs),
	                         static_cast<double>(total), r.clamped);
	return r;
}

SampleHResult sample_h(const LshTable &table, const Dataset &data, const ResolvedParams &params, Rng &rng) {
	return detail::sample_high_stratum(
	    static_cast<double>(table.same_bucket_pairs()), params.m_h, rng,
	    [&table](Rng &g) { return table.sample_pair(g); }, cosine_predicate(data, params.tau_cos));
}

SampleLResult sample_l(const LshTable &table, const Dataset &data, const ResolvedParams &params, Rng &rng) {
	if (data.size() < 2) {
		return {};
	}
	double low = static_cast<double>(data.pair_count() - table.same_bucket_pairs());
	return detail::sample_low_stratum(
	    low, params, rng, [&data](Rng &g) { return draw_distinct_pair(g, data.size()); },
	    [&table](VectorId u, VectorId v) { return table.same_bucket(u, v); },
	    cosine_predicate(data, params.tau_cos));
}

EstimateReport lsh_ss(const LshTable &table, const Dataset &data, const EstimatorParams &params) {
	auto p = resolve(params, data.size());
	auto total = data.pair_count();
	auto r = base_report("lsh_ss", p, total);
	r.n_h = static_cast<double>(table.same_bucket_pairs());
	Rng rng_h(derive_seed(p.seed, kHighStream));
	Rng rng_l(derive_seed(p.seed, kLowStream));
	auto h = sample_h(table, data, p, rng_h);
	auto l = sample_l(table, data, p, rng_l);
	combine(r, h, l, static_cast<double>(total) - *r.n_h);
	return r;
}

EstimateReport lsh_ss(const LshIndex &index, const Dataset &data, const EstimatorParams &params) {
	if (index.table_count() != 1) {
		throw InvalidInput("lsh_ss needs a single-table index; use lsh_ss_median or lsh_ss_virtual");
	}
	return lsh_ss(index.table(0), data, params);
}

double lower_median(std::vector<double> values) {
	if (values.empty()) {
		throw InvalidInput("median of an empty set");
	}
	auto mid = values.begin() + static_cast<std::ptrdiff_t>((values.size() - 1) / 2);
	std::nth_element(values.begin(), mid, values.end());
	return *mid;
}

EstimateReport lsh_ss_median(const LshIndex &index, const Dataset &data, const EstimatorParams &params) {
	std::vector<EstimateReport> runs;
	runs.reserve(index.table_count());
	for (std::size_t t = 0; t < index.table_count(); ++t) {
		EstimatorParams per_table = params;
		per_table.seed = t == 0 ? params.seed : derive_seed(params.seed, 1000 + t);
		runs.push_back(lsh_ss(index.table(t), data, per_table));
	}
	std::vector<double> estimates;
	for (const auto &run : runs) {
		estimates.push_back(run.j_hat);
	}
	double median = lower_median(estimates);
	auto chosen = std::find_if(runs.begin(), runs.end(), [&](const EstimateReport &x) { return x.j_hat == median; });
	EstimateReport r = *chosen;
	r.estimator = "lsh_ss_median";
	r.per_table = estimates;
	r.samples_used = 0;
	r.sim_evals = 0;
	r.rejected = 0;
	for (const auto &run : runs) {
		r.samples_used += run.samples_used;
		r.sim_evals += run.sim_evals;
		r.rejected += run.rejected;
	}
	return r;
}

std::uint64_t virtual_same_bucket_pairs(const LshIndex &index) {
	std::uint64_t count = 0;
	const auto n = static_cast<VectorId>(index.vector_count());
	for (VectorId u = 0; u < n; ++u) {
		for (VectorId v = u + 1; v < n; ++v) {
			if (index.same_virtual_bucket(u, v)) {
				++count;
			}
		}
	}
	return count;
}

EstimateReport lsh_ss_virtual(const LshIndex &index, const Dataset &data, const EstimatorParams &params) {
	auto p = resolve(params, data.size());
	auto total = data.pair_count();
	auto r = base_report("lsh_ss_virtual", p, total);
	if (index.vector_count() != data.size()) {
		throw InvalidInput("index and dataset sizes differ");
	}

	// Proposals come from the union of per-table strata: pick a table by its N_H,
	// a pair inside it, and keep the pair with probability 1/(tables sharing it).
	// Accepted pairs are uniform over the virtual same-bucket stratum.
	std::vector<std::uint64_t> table_pairs;
	for (const auto &t : index.tables()) {
		table_pairs.push_back(t.same_bucket_pairs());
	}
	WeightedIndex table_picker(table_pairs);
	const double proposal_mass = static_cast<double>(table_picker.total());

	Rng rng_h(derive_seed(p.seed, kHighStream));
	Rng rng_l(derive_seed(p.seed, kLowStream));
	std::uint64_t proposals = 0;
	auto draw_virtual_high = [&](Rng &g) {
		while (true) {
			++proposals;
			const auto &t = index.table(table_picker.draw(g));
			auto [u, v] = t.sample_pair(g);
			std::uint64_t sharing = 0;
			for (const auto &other : index.tables()) {
				sharing += other.same_bucket(u, v) ? 1 : 0;
			}
			if (uniform_below(g, sharing) == 0) {
				return std::pair<VectorId, VectorId>{u, v};
			}
		}
	};
	auto is_true = cosine_predicate(data, p.tau_cos);

	SampleHResult h;
	double n_h = 0.0;
	if (proposal_mass > 0.0) {
		if (data.size() <= p.virtual_exact_limit) {
			n_h = static_cast<double>(virtual_same_bucket_pairs(index));
			h = detail::sample_high_stratum(n_h, p.m_h, rng_h, draw_virtual_high, is_true);
		} else {
			// N_H from the acceptance rate of the proposal stream.
			h = detail::sample_high_stratum(1.0, p.m_h, rng_h, draw_virtual_high, is_true);
			n_h = proposal_mass * static_cast<double>(p.m_h) / static_cast<double>(proposals);
			h.j_h_hat = static_cast<double>(h.n_true) * n_h / static_cast<double>(p.m_h);
			r.n_h_estimated = true;
		}
	}
	r.n_h = n_h;
	double low = static_cast<double>(total) - n_h;
	SampleLResult l;
	if (data.size() >= 2) {
		l = detail::sample_low_stratum(
		    low, p, rng_l, [&data](Rng &g) { return draw_distinct_pair(g, data.size()); },
		    [&index](VectorId u, VectorId v) { return index.same_virtual_bucket(u, v); }, is_true);
	}
	combine(r, h, l, low);
	return r;
}

EstimatorKind parse_estimator(std::string_view name) {
	for (auto kind : all_estimators()) {
		if (estimator_name(kind) == name) {
			return kind;
		}
	}
	throw InvalidInput("unknown estimator '" + std::string(name) + "'");
}

std::string_view estimator_name(EstimatorKind kind) {
	switch (kind) {
	case EstimatorKind::rs_pop:
		return "rs_pop";
	case EstimatorKind::rs_cross:
		return "rs_cross";
	case EstimatorKind::j_uniform:
		return "j_uniform";
	case EstimatorKind::lsh_s:
		return "lsh_s";
	case EstimatorKind::lsh_ss:
		return "lsh_ss";
	case EstimatorKind::lsh_ss_d:
		return "lsh_ss_d";
	case EstimatorKind::lsh_ss_median:
		return "lsh_ss_median";
	case EstimatorKind::lsh_ss_virtual:
		return "lsh_ss_virtual";
	}
	return "unknown";
}

const std::vector<EstimatorKind> &all_estimators() {
	static const std::vector<EstimatorKind> kinds = {
	    EstimatorKind::rs_pop, EstimatorKind::rs_cross, EstimatorKind::j_uniform,     EstimatorKind::lsh_s,
	    EstimatorKind::lsh_ss, EstimatorKind::lsh_ss_d, EstimatorKind::lsh_ss_median, EstimatorKind::lsh_ss_virtual};
	return kinds;
}

EstimateReport run_estimator(EstimatorKind kind, const LshIndex &index, const Dataset &data,
                             const EstimatorParams &params) {
	auto single_table = [&]() -> const LshTable & {
		if (index.table_count() != 1) {
			throw InvalidInput(std::string(estimator_name(kind)) + " needs a single-table index");
		}
		return index.table(0);
	};
	switch (kind) {
	case EstimatorKind::rs_pop:
		return rs_pop(data, params);
	case EstimatorKind::rs_cross:
		return rs_cross(data, params);
	case EstimatorKind::j_uniform:
		return j_uniform_report(single_table(), data, params);
	case EstimatorKind::lsh_s:
		return lsh_s(single_table(), data, params);
	case EstimatorKind::lsh_ss:
		return lsh_ss(single_table(), data, params);
	case EstimatorKind::lsh_ss_d: {
		EstimatorParams damped = params;
		if (damped.dampening.kind == DampeningKind::none) {
			damped.dampening = {DampeningKind::adaptive, 1.0};
		}
		auto r = lsh_ss(single_table(), data, damped);
		r.estimator = "lsh_ss_d";
		return r;
	}
	case EstimatorKind::lsh_ss_median:
		return lsh_ss_median(index, data, params);
	case EstimatorKind::lsh_ss_virtual:
		return lsh_ss_virtual(index, data, params);
	}
	throw InvalidInput("unknown estimator");
}

} // namespace vsj
