#include "test_support.hpp"
#include "vsj/error.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

using namespace vsj;
using vsj::test::vec;

namespace {

// 1 - theta/pi with theta from atan2, independent of the library's acos path.
double angular_reference(double c) {
	return 1.0 - std::atan2(std::sqrt(1.0 - c * c), c) / std::numbers::pi;
}

std::vector<SparseVector> random_vectors(std::size_t count, std::uint64_t seed) {
	std::mt19937_64 rng(seed);
	std::normal_distribution<double> g;
	std::bernoulli_distribution keep(0.4);
	std::vector<SparseVector> out;
	while (out.size() < count) {
		std::vector<double> dense(12);
		for (auto &x : dense) {
			x = keep(rng) ? g(rng) : 0.0;
		}
		if (std::any_of(dense.begin(), dense.end(), [](double x) { return x != 0.0; })) {
			out.push_back(vec(static_cast<VectorId>(out.size()), dense));
		}
	}
	return out;
}

} // namespace

TEST(Cosine, HandExamples) {
	EXPECT_DOUBLE_EQ(cosine(vec(0, {1, 0}), vec(1, {0, 1})), 0.0);
	EXPECT_DOUBLE_EQ(cosine(vec(0, {1, 1}), vec(1, {2, 2})), 1.0);
	EXPECT_NEAR(cosine(vec(0, {3, 4}), vec(1, {4, 3})), 0.96, 1e-15);
}

TEST(Cosine, NegativeWeightsGiveNegativeCosine) {
	EXPECT_DOUBLE_EQ(cosine(vec(0, {1, 2}), vec(1, {-1, -2})), -1.0);
}

TEST(Angular, HandExamples) {
	EXPECT_DOUBLE_EQ(cosine_to_angular(1.0), 1.0);
	EXPECT_DOUBLE_EQ(cosine_to_angular(0.0), 0.5);
	EXPECT_NEAR(cosine_to_angular(0.96), angular_reference(0.96), 1e-12);
	EXPECT_NEAR(cosine_to_angular(0.96), 0.909666, 1e-6);
	EXPECT_NEAR(angular_sim(vec(0, {3, 4}), vec(1, {4, 3})), angular_reference(0.96), 1e-12);
}

TEST(Angular, ThresholdConversion) {
	EXPECT_DOUBLE_EQ(threshold_to_angular(1.0), 1.0);
	EXPECT_DOUBLE_EQ(threshold_to_angular(0.0), 0.5);
	EXPECT_NEAR(threshold_to_angular(0.96), angular_reference(0.96), 1e-12);
	EXPECT_THROW(threshold_to_angular(-0.1), InvalidInput);
	EXPECT_THROW(threshold_to_angular(1.5), InvalidInput);
	EXPECT_THROW(threshold_to_angular(std::nan("")), InvalidInput);
}

TEST(Angular, SimilarityKindDispatch) {
	auto u = vec(0, {3, 4});
	auto v = vec(1, {4, 3});
	EXPECT_EQ(similarity(SimilarityKind::cosine, u, v), cosine(u, v));
	EXPECT_EQ(similarity(SimilarityKind::angular, u, v), angular_sim(u, v));
}

TEST(CosineProperties, SymmetrySelfAndScale) {
	auto vs = random_vectors(200, 3);
	for (std::size_t i = 0; i + 1 < vs.size(); ++i) {
		const auto &u = vs[i];
		const auto &v = vs[i + 1];
		EXPECT_EQ(cosine(u, v), cosine(v, u));
		EXPECT_NEAR(cosine(u, u), 1.0, 1e-9);
		for (double c : {0.5, 2.0, 10.0}) {
			EXPECT_NEAR(cosine(u.scaled(c), v), cosine(u, v), 1e-9);
		}
	}
}

TEST(CosineProperties, RankOrderMatchesAngular) {
	auto vs = random_vectors(2000, 4);
	std::vector<std::pair<double, double>> sims;
	for (std::size_t i = 0; i + 1 < vs.size(); i += 2) {
		sims.emplace_back(cosine(vs[i], vs[i + 1]), angular_sim(vs[i], vs[i + 1]));
	}
	ASSERT_EQ(sims.size(), 1000u);
	std::sort(sims.begin(), sims.end());
	for (std::size_t i = 1; i < sims.size(); ++i) {
		EXPECT_LE(sims[i - 1].second, sims[i].second);
	}
}

TEST(SparseVector, ValidatesLayout) {
	EXPECT_THROW(SparseVector(0, {}), InvalidInput);
	EXPECT_THROW(SparseVector(0, {{2, 1.0}, {1, 1.0}}), InvalidInput);
	EXPECT_THROW(SparseVector(0, {{1, 1.0}, {1, 2.0}}), InvalidInput);
	EXPECT_THROW(SparseVector(0, {{1, std::numeric_limits<double>::infinity()}}), InvalidInput);
	EXPECT_THROW(SparseVector(0, {{1, std::nan("")}}), InvalidInput);
	EXPECT_THROW(SparseVector(0, {{1, 0.0}}), InvalidInput);
}

TEST(SparseVector, Accessors) {
	SparseVector v(7, {{2, 3.0}, {9, 4.0}});
	EXPECT_EQ(v.id(), 7u);
	EXPECT_EQ(v.nnz(), 2u);
	EXPECT_DOUBLE_EQ(v.norm(), 5.0);
	EXPECT_DOUBLE_EQ(v.squared_norm(), 25.0);
	EXPECT_EQ(v.max_dim(), 9u);
	EXPECT_EQ(v.with_id(1).id(), 1u);
	EXPECT_DOUBLE_EQ(v.scaled(2.0).norm(), 10.0);
	EXPECT_THROW(v.scaled(0.0), InvalidInput);
	EXPECT_DOUBLE_EQ(dot(v, SparseVector(0, {{9, 1.0}, {10, 5.0}})), 4.0);
}

TEST(Dataset, StoresByIdAndRequiresDenseIds) {
	std::vector<SparseVector> vs = {vec(1, {1, 0}), vec(0, {0, 1})};
	Dataset d(vs);
	EXPECT_EQ(d.size(), 2u);
	EXPECT_EQ(d[0].id(), 0u);
	EXPECT_EQ(d.pair_count(), 1u);
	EXPECT_THROW(d.at(2), InvalidInput);
	EXPECT_THROW(Dataset({vec(0, {1}), vec(2, {1})}), InvalidInput);
	EXPECT_THROW(Dataset({vec(0, {1}), vec(0, {2})}), InvalidInput);
}

TEST(DatasetIo, ParsesCommentsAndBlankLines) {
	std::istringstream in("# header\n\n1\t0:1 3:2.5\n0\t2:-1\n");
	auto d = read_sparse_vectors(in);
	ASSERT_EQ(d.size(), 2u);
	EXPECT_EQ(d[1].entries()[1].dim, 3u);
	EXPECT_DOUBLE_EQ(d[1].entries()[1].weight, 2.5);
	EXPECT_DOUBLE_EQ(d[0].entries()[0].weight, -1.0);
	EXPECT_EQ(d.max_dim(), 3u);
}

TEST(DatasetIo, RejectsMalformedLines) {
	for (const char *text : {"0 1:1\n", "0\t1-1\n", "0\t1:x\n", "x\t1:1\n", "0\t3:1 2:1\n", "0\t1:0\n", "0\t\n"}) {
		std::istringstream in(text);
		EXPECT_THROW(read_sparse_vectors(in), InvalidInput) << text;
	}
}

TEST(DatasetIo, RoundTripIsByteIdentical) {
	auto vs = random_vectors(50, 9);
	Dataset d(vs);
	std::ostringstream first;
	write_sparse_vectors(first, d);
	std::istringstream in(first.str());
	auto back = read_sparse_vectors(in);
	std::ostringstream second;
	write_sparse_vectors(second, back);
	EXPECT_EQ(first.str(), second.str());
	for (std::size_t i = 0; i < d.size(); ++i) {
		ASSERT_EQ(d[i].nnz(), back[i].nnz());
		for (std::size_t e = 0; e < d[i].nnz(); ++e) {
			EXPECT_EQ(d[i].entries()[e], back[i].entries()[e]);
		}
	}
}

TEST(DatasetIo, MissingFileIsInvalidInput) {
	EXPECT_THROW(load_sparse_vectors("/nonexistent/vectors.txt"), InvalidInput);
}

TEST(FormatDouble, ShortestRoundTrip) {
	EXPECT_EQ(format_double(0.1), "0.1");
	EXPECT_EQ(format_double(2.0), "2");
	double x = 1.0 / 3.0;
	EXPECT_EQ(std::stod(format_double(x)), x);
}
