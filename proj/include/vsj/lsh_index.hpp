#pragma once

#include "vsj/dataset.hpp"
#include "vsj/sampling.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

namespace vsj {

/// k-bit bucket key; bit i is hash function i of the table.
using Signature = std::uint64_t;

inline constexpr int kMaxHashBits = 64;

/// Random-hyperplane (SimHash) family. Hyperplane components are Gaussian values
/// derived from (seed, table, function, dimension) by a counter-based hash, so
/// planes never need to be stored and dimensionality is unbounded.
struct HashFamily {
	int k = 20;
	int ell = 1;
	std::uint64_t seed = 0;

	void validate() const;
	double plane_component(int table_idx, int fn, Dimension dim) const;
	/// Bit i is 1 iff dot(plane_i, v) >= 0.
	Signature signature(int table_idx, const SparseVector &v) const;
};

/// Parameters that reproduce one table's hash function g.
struct TableSpec {
	int k = 20;
	std::uint64_t seed = 0;
	int table_idx = 0;

	bool operator==(const TableSpec &) const = default;
};

struct Bucket {
	Signature signature = 0;
	std::vector<VectorId> members;

	std::uint64_t count() const { return members.size(); }
	std::uint64_t pair_count() const { return count() * (count() - 1) / 2; }
	bool operator==(const Bucket &) const = default;
};

/// One LSH table extended with bucket counts. Buckets are kept in signature
/// order; only non-empty buckets exist.
class LshTable {
public:
	static LshTable build(const Dataset &data, const HashFamily &family, int table_idx);
	/// Assembles a table from explicit buckets; every id in [0, n) must appear once.
	static LshTable from_buckets(TableSpec spec, std::vector<Bucket> buckets);

	const TableSpec &spec() const { return spec_; }
	std::span<const Bucket> buckets() const { return buckets_; }
	std::size_t bucket_count() const { return buckets_.size(); }
	std::size_t vector_count() const { return bucket_of_.size(); }
	/// N_H = sum_j C(b_j, 2).
	std::uint64_t same_bucket_pairs() const { return same_bucket_pairs_; }

	Signature signature_of(VectorId id) const;
	const Bucket &bucket_of(VectorId id) const;
	const Bucket *find(Signature signature) const;
	bool same_bucket(VectorId u, VectorId v) const;

	/// Uniform pair from S_H: bucket by C(b_j,2) weight, then two distinct members.
	std::pair<VectorId, VectorId> sample_pair(Rng &rng) const;

	/// bucket size -> number of buckets of that size
	std::map<std::uint64_t, std::uint64_t> size_histogram() const;

	bool operator==(const LshTable &other) const {
		return spec_ == other.spec_ && buckets_ == other.buckets_;
	}

private:
	LshTable() = default;
	void finalize();

	TableSpec spec_;
	std::vector<Bucket> buckets_;
	std::vector<std::uint32_t> bucket_of_;
	WeightedIndex pair_weights_;
	std::uint64_t same_bucket_pairs_ = 0;
};

class LshIndex {
public:
	static LshIndex build(const Dataset &data, const HashFamily &family);
	/// Tables may come from different families (e.g. mixed k); all must cover the same n.
	explicit LshIndex(std::vector<LshTable> tables);

	std::size_t table_count() const { return tables_.size(); }
	const LshTable &table(std::size_t i) const { return tables_.at(i); }
	const std::vector<LshTable> &tables() const { return tables_; }
	std::size_t vector_count() const { return tables_.front().vector_count(); }

	bool same_bucket(std::size_t table_idx, VectorId u, VectorId v) const;
	/// True iff u and v share a bucket in any table.
	bool same_virtual_bucket(VectorId u, VectorId v) const;

	bool operator==(const LshIndex &) const = default;

private:
	std::vector<LshTable> tables_;
};

} // namespace vsj
