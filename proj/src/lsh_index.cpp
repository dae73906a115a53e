#include "vsj/lsh_index.hpp"

#include "vsj/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace vsj {

WeightedIndex::WeightedIndex(const std::vector<std::uint64_t> &weights) {
	cumulative_.reserve(weights.size());
	std::uint64_t running = 0;
	for (auto w : weights) {
		running += w;
		cumulative_.push_back(running);
	}
}

std::size_t WeightedIndex::draw(Rng &rng) const {
	if (total() == 0) {
		throw EmptyStratum("weighted draw over zero total weight");
	}
	auto r = uniform_below(rng, total());
	auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), r);
	return static_cast<std::size_t>(it - cumulative_.begin());
}

void HashFamily::validate() const {
	if (k < 1 || k > kMaxHashBits) {
		throw InvalidInput("k must lie in [1, 64]");
	}
	if (ell < 1) {
		throw InvalidInput("ell must be positive");
	}
}

double HashFamily::plane_component(int table_idx, int fn, Dimension dim) const {
	std::uint64_t key = mix64(seed);
	key = mix64(key ^ static_cast<std::uint64_t>(table_idx));
	key = mix64(key ^ static_cast<std::uint64_t>(fn));
	key = mix64(key ^ static_cast<std::uint64_t>(dim));
	std::uint64_t other = mix64(key ^ 0xd1b54a32d192ed03ULL);
	// Box-Muller on two 53-bit uniforms; u1 is kept away from zero.
	double u1 = (static_cast<double>(key >> 11) + 1.0) * 0x1.0p-53;
	double u2 = static_cast<double>(other >> 11) * 0x1.0p-53;
	return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Signature HashFamily::signature(int table_idx, const SparseVector &v) const {
	if (table_idx < 0 || table_idx >= ell) {
		throw InvalidInput("table index " + std::to_string(table_idx) + " out of range");
	}
	Signature sig = 0;
	for (int fn = 0; fn < k; ++fn) {
		double projection = 0.0;
		for (const auto &e : v.entries()) {
			projection += plane_component(table_idx, fn, e.dim) * e.weight;
		}
		if (projection >= 0.0) {
			sig |= Signature{1} << fn;
		}
	}
	return sig;
}

LshTable LshTable::build(const Dataset &data, const HashFamily &family, int table_idx) {
	family.validate();
	if (data.empty()) {
		throw InvalidInput("cannot index an empty dataset");
	}
	std::vector<std::pair<Signature, VectorId>> keyed;
	keyed.reserve(data.size());
	for (const auto &v : data.vectors()) {
		keyed.emplace_back(family.signature(table_idx, v), v.id());
	}
	std::sort(keyed.begin(), keyed.end());

	LshTable table;
	table.spec_ = {family.k, family.seed, table_idx};
	for (const auto &[sig, id] : keyed) {
		if (table.buckets_.empty() || table.buckets_.back().signature != sig) {
			table.buckets_.push_back({sig, {}});
		}
		table.buckets_.back().members.push_back(id);
	}
	table.finalize();
	return table;
}

LshTable LshTable::from_buckets(TableSpec spec, std::vector<Bucket> buckets) {
	LshTable table;
	table.spec_ = spec;
	std::sort(buckets.begin(), buckets.end(),
	          [](const Bucket &a, const Bucket &b) { return a.signature < b.signature; });
	for (std::size_t i = 0; i < buckets.size(); ++i) {
		if (buckets[i].members.empty()) {
			throw InvalidInput("empty bucket");
		}
		if (i > 0 && buckets[i].signature == buckets[i - 1].signature) {
			throw InvalidInput("duplicate bucket signature");
		}
		std::sort(buckets[i].members.begin(), buckets[i].members.end());
	}
	table.buckets_ = std::move(buckets);
	table.finalize();
	return table;
}

void LshTable::finalize() {
	std::size_t n = 0;
	for (const auto &b : buckets_) {
		n += b.members.size();
	}
	constexpr auto unset = static_cast<std::uint32_t>(-1);
	bucket_of_.assign(n, unset);
	std::vector<std::uint64_t> weights;
	weights.reserve(buckets_.size());
	same_bucket_pairs_ = 0;
	for (std::size_t j = 0; j < buckets_.size(); ++j) {
		for (auto id : buckets_[j].members) {
			if (id >= n || bucket_of_[id] != unset) {
				throw InvalidInput("bucket members must cover ids [0, n) exactly once");
			}
			bucket_of_[id] = static_cast<std::uint32_t>(j);
		}
		weights.push_back(buckets_[j].pair_count());
		same_bucket_pairs_ += buckets_[j].pair_count();
	}
	pair_weights_ = WeightedIndex(weights);
}

const Bucket &LshTable::bucket_of(VectorId id) const {
	if (id >= bucket_of_.size()) {
		throw InvalidInput("unknown vector id " + std::to_string(id));
	}
	return buckets_[bucket_of_[id]];
}

Signature LshTable::signature_of(VectorId id) const { return bucket_of(id).signature; }

const Bucket *LshTable::find(Signature signature) const {
	auto it = std::lower_bound(buckets_.begin(), buckets_.end(), signature,
	                           [](const Bucket &b, Signature s) { return b.signature < s; });
	return it != buckets_.end() && it->signature == signature ? &*it : nullptr;
}

bool LshTable::same_bucket(VectorId u, VectorId v) const {
	if (u >= bucket_of_.size() || v >= bucket_of_.size()) {
		throw InvalidInput("unknown vector id in same_bucket");
	}
	return bucket_of_[u] == bucket_of_[v];
}

std::pair<VectorId, VectorId> LshTable::sample_pair(Rng &rng) const {
	if (same_bucket_pairs_ == 0) {
		throw EmptyStratum("table has no same-bucket pairs");
	}
	const auto &bucket = buckets_[pair_weights_.draw(rng)];
	auto [a, b] = draw_distinct_pair(rng, bucket.count());
	return {bucket.members[a], bucket.members[b]};
}

std::map<std::uint64_t, std::uint64_t> LshTable::size_histogram() const {
	std::map<std::uint64_t, std::uint64_t> hist;
	for (const auto &b : buckets_) {
		++hist[b.count()];
	}
	return hist;
}

LshIndex LshIndex::build(const Dataset &data, const HashFamily &family) {
	family.validate();
	std::vector<LshTable> tables;
	tables.reserve(family.ell);
	for (int t = 0; t < family.ell; ++t) {
		tables.push_back(LshTable::build(data, family, t));
	}
	return LshIndex(std::move(tables));
}

LshIndex::LshIndex(std::vector<LshTable> tables) : tables_(std::move(tables)) {
	if (tables_.empty()) {
		throw InvalidInput("an index needs at least one table");
	}
	for (const auto &t : tables_) {
		if (t.vector_count() != tables_.front().vector_count()) {
			throw InvalidInput("all tables must index the same vectors");
		}
	}
}

bool LshIndex::same_bucket(std::size_t table_idx, VectorId u, VectorId v) const {
	if (table_idx >= tables_.size()) {
		throw InvalidInput("table index out of range");
	}
	return tables_[table_idx].same_bucket(u, v);
}

bool LshIndex::same_virtual_bucket(VectorId u, VectorId v) const {
	for (const auto &t : tables_) {
		if (t.same_bucket(u, v)) {
			return true;
		}
	}
	return false;
}

} // namespace vsj
