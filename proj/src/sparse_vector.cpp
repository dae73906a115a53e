#include "vsj/sparse_vector.hpp"

#include "vsj/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace vsj {

SparseVector::SparseVector(VectorId id, std::vector<Entry> entries)
    : id_(id), entries_(std::move(entries)), squared_norm_(0.0), norm_(0.0) {
	if (entries_.empty()) {
		throw InvalidInput("vector " + std::to_string(id_) + " has no entries");
	}
	for (std::size_t i = 0; i < entries_.size(); ++i) {
		if (i > 0 && entries_[i].dim <= entries_[i - 1].dim) {
			throw InvalidInput("vector " + std::to_string(id_) +
			                   ": dimensions must be strictly ascending");
		}
		if (!std::isfinite(entries_[i].weight)) {
			throw InvalidInput("vector " + std::to_string(id_) + ": non-finite weight");
		}
		squared_norm_ += entries_[i].weight * entries_[i].weight;
	}
	if (!(squared_norm_ > 0.0)) {
		throw InvalidInput("vector " + std::to_string(id_) + " is a zero vector");
	}
	norm_ = std::sqrt(squared_norm_);
}

SparseVector SparseVector::scaled(double factor) const {
	std::vector<Entry> out(entries_.begin(), entries_.end());
	for (auto &e : out) {
		e.weight *= factor;
	}
	return SparseVector(id_, std::move(out));
}

SparseVector SparseVector::with_id(VectorId id) const {
	SparseVector copy = *this;
	copy.id_ = id;
	return copy;
}

double dot(const SparseVector &u, const SparseVector &v) {
	auto a = u.entries();
	auto b = v.entries();
	std::size_t i = 0;
	std::size_t j = 0;
	double sum = 0.0;
	while (i < a.size() && j < b.size()) {
		if (a[i].dim < b[j].dim) {
			++i;
		} else if (b[j].dim < a[i].dim) {
			++j;
		} else {
			sum += a[i].weight * b[j].weight;
			++i;
			++j;
		}
	}
	return sum;
}

double cosine_from_dot(double dot_product, double squared_norm_u, double squared_norm_v) {
	double c = dot_product / std::sqrt(squared_norm_u * squared_norm_v);
	return std::clamp(c, -1.0, 1.0);
}

double cosine(const SparseVector &u, const SparseVector &v) {
	return cosine_from_dot(dot(u, v), u.squared_norm(), v.squared_norm());
}

double cosine_to_angular(double cosine_value) {
	return 1.0 - std::acos(std::clamp(cosine_value, -1.0, 1.0)) / std::numbers::pi;
}

double angular_sim(const SparseVector &u, const SparseVector &v) {
	return cosine_to_angular(cosine(u, v));
}

double threshold_to_angular(double tau_cos) {
	if (!(tau_cos >= 0.0 && tau_cos <= 1.0)) {
		throw InvalidInput("cosine threshold must lie in [0, 1]");
	}
	return cosine_to_angular(tau_cos);
}

double similarity(SimilarityKind kind, const SparseVector &u, const SparseVector &v) {
	return kind == SimilarityKind::cosine ? cosine(u, v) : angular_sim(u, v);
}

} // namespace vsj
