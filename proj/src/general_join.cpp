#include "vsj/general_join.hpp"

#include "vsj/detail/stratum_sampling.hpp"
#include "vsj/error.hpp"

#include <algorithm>

namespace vsj {

GeneralJoinIndex GeneralJoinIndex::build(const Dataset &left, const Dataset &right, const HashFamily &family) {
	return GeneralJoinIndex(LshTable::build(left, family, 0), LshTable::build(right, family, 0));
}

GeneralJoinIndex::GeneralJoinIndex(LshTable left, LshTable right) : left_(std::move(left)), right_(std::move(right)) {
	if (!(left_.spec() == right_.spec())) {
		throw InvalidInput("general join tables must share one hash function (same seed, k, table)");
	}
	// Both bucket lists are in signature order; intersect by merging.
	auto a = left_.buckets();
	auto b = right_.buckets();
	std::vector<std::uint64_t> weights;
	std::size_t i = 0;
	std::size_t j = 0;
	while (i < a.size() && j < b.size()) {
		if (a[i].signature < b[j].signature) {
			++i;
		} else if (b[j].signature < a[i].signature) {
			++j;
		} else {
			matches_.push_back({i, j});
			weights.push_back(a[i].count() * b[j].count());
			same_bucket_pairs_ += weights.back();
			++i;
			++j;
		}
	}
	weights_ = WeightedIndex(weights);
}

std::uint64_t GeneralJoinIndex::total_pairs() const {
	return static_cast<std::uint64_t>(left_size()) * static_cast<std::uint64_t>(right_size());
}

bool GeneralJoinIndex::same_bucket(VectorId u, VectorId v) const {
	return left_.signature_of(u) == right_.signature_of(v);
}

std::pair<VectorId, VectorId> GeneralJoinIndex::sample_pair(Rng &rng) const {
	if (same_bucket_pairs_ == 0) {
		throw EmptyStratum("no signature is shared by the two collections");
	}
	const auto &m = matches_[weights_.draw(rng)];
	const auto &b = left_.buckets()[m.left];
	const auto &c = right_.buckets()[m.right];
	auto u = b.members[uniform_below(rng, b.count())];
	auto v = c.members[uniform_below(rng, c.count())];
	return {u, v};
}

namespace {

std::uint64_t side_size(const Dataset &left, const Dataset &right) {
	return std::max<std::uint64_t>(left.size(), right.size());
}

auto cross_predicate(const Dataset &left, const Dataset &right, double tau_cos) {
	return [&left, &right, tau_cos](VectorId u, VectorId v) { return cosine(left[u], right[v]) >= tau_cos; };
}

auto cross_draw(const Dataset &left, const Dataset &right) {
	return [&left, &right](Rng &g) {
		return std::pair<VectorId, VectorId>{static_cast<VectorId>(uniform_below(g, left.size())),
		                                     static_cast<VectorId>(uniform_below(g, right.size()))};
	};
}

} // namespace

EstimateReport general_lsh_ss(const GeneralJoinIndex &index, const Dataset &left, const Dataset &right,
                              const EstimatorParams &params) {
	if (index.left_size() != left.size() || index.right_size() != right.size()) {
		throw InvalidInput("general join index does not match the datasets");
	}
	auto p = resolve(params, side_size(left, right));
	EstimateReport r;
	r.estimator = "general_lsh_ss";
	r.tau_cos = p.tau_cos;
	r.tau_ang = p.tau_ang;
	r.total_pairs = index.total_pairs();
	double n_h = static_cast<double>(index.same_bucket_pairs());
	double n_l = static_cast<double>(index.total_pairs() - index.same_bucket_pairs());
	r.n_h = n_h;

	auto is_true = cross_predicate(left, right, p.tau_cos);
	Rng rng_h(derive_seed(p.seed, 1));
	Rng rng_l(derive_seed(p.seed, 2));
	auto h = detail::sample_high_stratum(
	    n_h, p.m_h, rng_h, [&index](Rng &g) { return index.sample_pair(g); }, is_true);
	auto l = detail::sample_low_stratum(
	    n_l, p, rng_l, cross_draw(left, right),
	    [&index](VectorId u, VectorId v) { return index.same_bucket(u, v); }, is_true);

	r.j_h_hat = h.j_h_hat;
	r.j_l_hat = std::min(l.j_l_hat, n_l);
	r.clamped = l.j_l_hat > n_l;
	r.j_hat = *r.j_h_hat + *r.j_l_hat;
	r.n_true_sampled = h.n_true + l.n_true;
	r.samples_used = h.samples + l.samples;
	r.rejected = l.rejected;
	r.sim_evals = h.sim_evals + l.sim_evals;
	r.safe_lower_bound = l.safe;
	return r;
}

EstimateReport general_rs_pop(const Dataset &left, const Dataset &right, const EstimatorParams &params) {
	if (left.empty() || right.empty()) {
		throw InvalidInput("general_rs_pop needs non-empty collections");
	}
	auto p = resolve(params, side_size(left, right));
	EstimateReport r;
	r.estimator = "general_rs_pop";
	r.tau_cos = p.tau_cos;
	r.tau_ang = p.tau_ang;
	r.total_pairs = static_cast<std::uint64_t>(left.size()) * right.size();
	Rng rng(derive_seed(p.seed, 3));
	auto draw = cross_draw(left, right);
	auto is_true = cross_predicate(left, right, p.tau_cos);
	for (std::uint64_t i = 0; i < p.m_r; ++i) {
		auto [u, v] = draw(rng);
		if (is_true(u, v)) {
			++r.n_true_sampled;
		}
	}
	r.samples_used = p.m_r;
	r.sim_evals = p.m_r;
	r.j_hat = static_cast<double>(r.n_true_sampled) * static_cast<double>(r.total_pairs) /
	          static_cast<double>(p.m_r);
	return r;
}

} // namespace vsj
