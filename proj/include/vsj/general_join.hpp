#pragma once

#include "vsj/estimators.hpp"

#include <cstdint>
#include <vector>

namespace vsj {

/// Tables over U and V built with the same hash function, plus the matched
/// signatures that form the cross-collection same-bucket stratum.
class GeneralJoinIndex {
public:
	/// Uses table 0 of `family` on both sides.
	static GeneralJoinIndex build(const Dataset &left, const Dataset &right, const HashFamily &family);
	GeneralJoinIndex(LshTable left, LshTable right);

	const LshTable &left() const { return left_; }
	const LshTable &right() const { return right_; }
	std::size_t left_size() const { return left_.vector_count(); }
	std::size_t right_size() const { return right_.vector_count(); }
	/// M = |U| |V|
	std::uint64_t total_pairs() const;
	/// N_H = sum of b_j c_i over signatures present on both sides.
	std::uint64_t same_bucket_pairs() const { return same_bucket_pairs_; }
	std::size_t matched_signatures() const { return matches_.size(); }

	bool same_bucket(VectorId u, VectorId v) const;
	/// Uniform pair from the cross same-bucket stratum.
	std::pair<VectorId, VectorId> sample_pair(Rng &rng) const;

private:
	struct Match {
		std::size_t left;
		std::size_t right;
	};

	LshTable left_;
	LshTable right_;
	std::vector<Match> matches_;
	WeightedIndex weights_;
	std::uint64_t same_bucket_pairs_ = 0;
};

/// Stratified estimate of |{(u, v) in U x V : cos(u, v) >= tau}|. Unset sample
/// sizes default to max(|U|, |V|); delta to ceil(log2 max(|U|, |V|)).
EstimateReport general_lsh_ss(const GeneralJoinIndex &index, const Dataset &left, const Dataset &right,
                              const EstimatorParams &params);

/// Uniform sampling over U x V scaled by |U||V|/m_R.
EstimateReport general_rs_pop(const Dataset &left, const Dataset &right, const EstimatorParams &params);

} // namespace vsj
