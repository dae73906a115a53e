#include "test_support.hpp"
#include "vsj/error.hpp"
#include "vsj/oracle.hpp"
#include "vsj/synthetic.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

using namespace vsj;

namespace {

const Dataset &planted() {
	static const Dataset d = generate_corpus(SyntheticSpec{.n = 500, .cluster_count = 25, .cluster_size = 6, .seed = 4}).data;
	return d;
}

std::uint64_t brute(const Dataset &d, double tau) {
	std::uint64_t j = 0;
	for (VectorId u = 0; u < d.size(); ++u) {
		for (VectorId v = u + 1; v < d.size(); ++v) {
			j += cosine(d[u], d[v]) >= tau;
		}
	}
	return j;
}

} // namespace

TEST(ExactJoin, HandExamples) {
	EXPECT_EQ(exact_join_size(vsj::test::identical(10), 0.9), 45u);
	EXPECT_EQ(exact_join_size(vsj::test::orthogonal(10), 0.01), 0u);
	auto three = vsj::test::dataset({{1, 0}, {1, 1}, {0, 1}});
	EXPECT_EQ(exact_join_size(three, 0.7), 2u);
	EXPECT_EQ(exact_join_size(three, 0.8), 0u);
}

TEST(ExactJoin, SweepMatchesBruteForceAndIsMonotone) {
	std::vector<double> taus = {0.05, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99, 1.0};
	auto js = exact_join_sizes(planted(), taus);
	ASSERT_EQ(js.size(), taus.size());
	for (std::size_t i = 0; i < taus.size(); ++i) {
		EXPECT_EQ(js[i], brute(planted(), taus[i])) << taus[i];
		EXPECT_EQ(js[i], exact_join_size(planted(), taus[i]));
		if (i > 0) {
			EXPECT_LE(js[i], js[i - 1]);
		}
	}
	std::vector<double> descending = {0.9, 0.5};
	EXPECT_THROW(exact_join_sizes(planted(), descending), InvalidInput);
}

TEST(ExactJoin, RefusesLargeInput) {
	EXPECT_THROW(exact_join_size(planted(), 0.5, 100), OracleRefusal);
	auto index = LshIndex::build(planted(), HashFamily{20, 1, 0});
	EXPECT_THROW(profile(index, planted(), 0.5, false, 100), OracleRefusal);
}

TEST(Profile, Invariants) {
	auto index = LshIndex::build(planted(), HashFamily{20, 1, 0});
	std::vector<double> taus = {0.1, 0.3, 0.5, 0.7, 0.9};
	auto ps = profile_sweep(index, planted(), taus);
	for (const auto &p : ps) {
		EXPECT_EQ(p.j_h + p.j_l, p.j);
		EXPECT_EQ(p.n_h + p.n_l, planted().pair_count());
		EXPECT_EQ(p.n_h, index.table(0).same_bucket_pairs());
		EXPECT_EQ(p.j, exact_join_size(planted(), p.tau_cos));
		EXPECT_DOUBLE_EQ(p.p_t, static_cast<double>(p.j) / planted().pair_count());
		EXPECT_DOUBLE_EQ(p.p_t_given_h, static_cast<double>(p.j_h) / p.n_h);
		EXPECT_DOUBLE_EQ(p.p_h_given_t, static_cast<double>(p.j_h) / p.j);
		EXPECT_DOUBLE_EQ(p.p_t_given_l, static_cast<double>(p.j_l) / p.n_l);
	}
}

TEST(Profile, ZeroDenominators) {
	auto orth = vsj::test::orthogonal(6);
	auto index = LshIndex::build(orth, HashFamily{20, 1, 0});
	auto p = profile(index, orth, 0.5);
	EXPECT_EQ(p.j, 0u);
	EXPECT_EQ(p.p_h_given_t, 0.0);
	EXPECT_TRUE(p.zero_denominator);

	auto same = vsj::test::identical(6);
	auto si = LshIndex::build(same, HashFamily{20, 1, 0});
	auto q = profile(si, same, 0.9);
	EXPECT_EQ(q.p_t_given_h, 1.0);
	EXPECT_EQ(q.n_l, 0u);
	EXPECT_EQ(q.p_t_given_l, 0.0);
	EXPECT_TRUE(q.zero_denominator);
}

TEST(Profile, IndependentOfEnumerationOrder) {
	std::vector<VectorId> perm(planted().size());
	std::iota(perm.begin(), perm.end(), 0);
	std::shuffle(perm.begin(), perm.end(), std::mt19937_64(3));
	std::vector<SparseVector> shuffled;
	for (VectorId i = 0; i < perm.size(); ++i) {
		shuffled.push_back(planted()[perm[i]].with_id(i));
	}
	Dataset other(std::move(shuffled));
	HashFamily f{20, 1, 0};
	auto a = profile(LshIndex::build(planted(), f), planted(), 0.6);
	auto b = profile(LshIndex::build(other, f), other, 0.6);
	EXPECT_EQ(a.j, b.j);
	EXPECT_EQ(a.j_h, b.j_h);
	EXPECT_EQ(a.n_h, b.n_h);
}

TEST(Profile, VirtualStrata) {
	auto index = LshIndex::build(planted(), HashFamily{12, 3, 1});
	auto p = profile(index, planted(), 0.5, true);
	std::uint64_t n_h = 0, j_h = 0;
	for (VectorId u = 0; u < planted().size(); ++u) {
		for (VectorId v = u + 1; v < planted().size(); ++v) {
			bool h = index.same_virtual_bucket(u, v);
			n_h += h;
			j_h += h && cosine(planted()[u], planted()[v]) >= 0.5;
		}
	}
	EXPECT_EQ(p.n_h, n_h);
	EXPECT_EQ(p.j_h, j_h);
}

TEST(AssumptionCheck, Regimes) {
	OracleProfile p;
	p.p_t_given_h = 1.0;
	p.p_t_given_l = 0.0;
	EXPECT_EQ(assumption_check(p, 1024), Regime::high);
	p.p_t_given_l = 0.5;
	EXPECT_EQ(assumption_check(p, 1024), Regime::low);
	p.p_t_given_h = 0.0;
	EXPECT_EQ(assumption_check(p, 1024), Regime::neither);
	p.p_t_given_h = 1.0;
	p.p_t_given_l = 5.0 / 1024;
	EXPECT_EQ(assumption_check(p, 1024), Regime::neither);
	EXPECT_EQ(regime_name(Regime::low), "low");
}

TEST(ProfileCsv, HeaderAndRows) {
	auto three = vsj::test::dataset({{1, 0}, {1, 1}, {0, 1}});
	auto index = LshIndex::build(three, HashFamily{20, 1, 0});
	std::vector<double> taus = {0.7};
	auto ps = profile_sweep(index, three, taus);
	std::ostringstream out;
	write_profile_csv(out, ps);
	auto text = out.str();
	EXPECT_EQ(text.substr(0, text.find('\n')), "tau,J,J_H,J_L,N_H,N_L,p_T,p_T_given_H,p_H_given_T,p_T_given_L");
	EXPECT_EQ(text.substr(text.find('\n') + 1, 6), "0.7,2,");
}

TEST(CrossJoin, SelfPairsIncluded) {
	auto same = vsj::test::identical(4);
	EXPECT_EQ(exact_cross_join_size(same, same, 0.9), 16u);
	auto three = vsj::test::dataset({{1, 0}, {1, 1}, {0, 1}});
	EXPECT_EQ(exact_cross_join_size(three, three, 0.7), 7u);
}
