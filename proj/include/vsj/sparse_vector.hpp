#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace vsj {

using VectorId = std::uint32_t;
using Dimension = std::uint32_t;

struct Entry {
	Dimension dim;
	double weight;

	bool operator==(const Entry &) const = default;
};

/// Sparse real-valued vector with entries sorted by dimension and a cached norm.
/// Construction validates the layout; zero vectors are rejected.
class SparseVector {
public:
	SparseVector(VectorId id, std::vector<Entry> entries);

	VectorId id() const { return id_; }
	std::span<const Entry> entries() const { return entries_; }
	std::size_t nnz() const { return entries_.size(); }
	double norm() const { return norm_; }
	double squared_norm() const { return squared_norm_; }
	Dimension max_dim() const { return entries_.back().dim; }

	SparseVector scaled(double factor) const;
	SparseVector with_id(VectorId id) const;

private:
	VectorId id_;
	std::vector<Entry> entries_;
	double squared_norm_;
	double norm_;
};

double dot(const SparseVector &u, const SparseVector &v);

/// Cosine from a precomputed dot product and the two squared norms, clamped to [-1, 1].
/// Every code path that tests the cosine predicate goes through here so that the
/// oracle and the estimators agree bit-for-bit on threshold comparisons.
double cosine_from_dot(double dot_product, double squared_norm_u, double squared_norm_v);

double cosine(const SparseVector &u, const SparseVector &v);

/// 1 - arccos(c)/pi, the collision probability of one random hyperplane.
double cosine_to_angular(double cosine_value);

double angular_sim(const SparseVector &u, const SparseVector &v);

/// Maps a cosine threshold to the equivalent angular threshold. Accepts [0, 1].
double threshold_to_angular(double tau_cos);

enum class SimilarityKind { cosine, angular };

double similarity(SimilarityKind kind, const SparseVector &u, const SparseVector &v);

} // namespace vsj
