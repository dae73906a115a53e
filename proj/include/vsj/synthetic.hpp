#pragma once

#include "vsj/dataset.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace vsj {

/// Desk-scale corpus: topical sparse background vectors plus planted clusters of
/// near-duplicates. Each cluster member is seed + e with |e| = noise |seed|, so
/// any two members of a cluster have cosine >= 1 - 2 noise^2.
struct SyntheticSpec {
	std::uint64_t n = 2000;
	std::uint32_t dims = 20000;
	std::uint32_t cluster_count = 40;
	std::uint32_t cluster_size = 8;
	double noise = 0.05;
	/// Background vectors draw a share `topic_mix` of their dimensions from a
	/// topic vocabulary [t * topic_vocab, (t + 1) * topic_vocab).
	std::uint32_t topics = 20;
	std::uint32_t topic_vocab = 100;
	double topic_mix = 0.5;
	std::uint32_t min_nnz = 5;
	std::uint32_t max_nnz = 20;
	std::uint64_t seed = 0;

	void validate() const;
};

struct SyntheticCorpus {
	Dataset data;
	/// Cluster index per vector id, -1 for background vectors.
	std::vector<int> cluster_of;
	double intra_cluster_floor = 1.0;
};

/// Lower bound on the cosine between two members of one cluster.
double intra_cluster_floor(double noise);

SyntheticCorpus generate_corpus(const SyntheticSpec &spec);

void write_manifest(std::ostream &out, const SyntheticSpec &spec, const SyntheticCorpus &corpus);

} // namespace vsj
