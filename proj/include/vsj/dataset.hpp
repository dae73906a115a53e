#pragma once

#include "vsj/sparse_vector.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace vsj {

/// Immutable collection of vectors with ids dense in [0, n).
class Dataset {
public:
	Dataset() = default;
	/// Vectors may arrive in any order; they are stored by id.
	explicit Dataset(std::vector<SparseVector> vectors);

	std::size_t size() const { return vectors_.size(); }
	bool empty() const { return vectors_.empty(); }
	/// Number of unordered pairs, n(n-1)/2.
	std::uint64_t pair_count() const;
	Dimension max_dim() const { return max_dim_; }

	const SparseVector &operator[](VectorId id) const { return vectors_[id]; }
	const SparseVector &at(VectorId id) const;
	const std::vector<SparseVector> &vectors() const { return vectors_; }

private:
	std::vector<SparseVector> vectors_;
	Dimension max_dim_ = 0;
};

/// Reads the `id<TAB>dim:weight ...` line format; `#` lines and blank lines are skipped.
Dataset read_sparse_vectors(std::istream &in);
Dataset load_sparse_vectors(const std::string &path);

void write_sparse_vectors(std::ostream &out, const Dataset &data);
void save_sparse_vectors(const std::string &path, const Dataset &data);

/// Shortest round-trip decimal form of a double.
std::string format_double(double value);

} // namespace vsj
