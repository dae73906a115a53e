#include "vsj/synthetic.hpp"

#include "vsj/error.hpp"
#include "vsj/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <set>

namespace vsj {

void SyntheticSpec::validate() const {
	if (n < 1) {
		throw InvalidInput("n must be positive");
	}
	if (static_cast<std::uint64_t>(cluster_count) * cluster_size > n) {
		throw InvalidInput("cluster_count * cluster_size exceeds n");
	}
	if (!(noise >= 0.0 && noise < 1.0)) {
		throw InvalidInput("noise must lie in [0, 1)");
	}
	if (min_nnz < 1 || max_nnz < min_nnz || max_nnz > dims) {
		throw InvalidInput("need 1 <= min_nnz <= max_nnz <= dims");
	}
	if (topics > 0 && static_cast<std::uint64_t>(topics) * topic_vocab > dims) {
		throw InvalidInput("topic vocabularies exceed dims");
	}
	if (topics > 0 && topic_vocab < max_nnz) {
		throw InvalidInput("topic_vocab must be at least max_nnz");
	}
	if (!(topic_mix >= 0.0 && topic_mix <= 1.0)) {
		throw InvalidInput("topic_mix must lie in [0, 1]");
	}
}

double intra_cluster_floor(double noise) {
	// Each member is within angle asin(noise) of the seed.
	return std::max(-1.0, 1.0 - 2.0 * noise * noise);
}

namespace {

std::vector<Entry> background_entries(const SyntheticSpec &spec, Rng &rng) {
	auto nnz = spec.min_nnz + uniform_below(rng, spec.max_nnz - spec.min_nnz + 1);
	std::uniform_real_distribution<double> unit(0.0, 1.0);
	std::uint64_t topic = spec.topics > 0 ? uniform_below(rng, spec.topics) : 0;
	std::set<Dimension> dims;
	while (dims.size() < nnz) {
		Dimension d;
		if (spec.topics > 0 && unit(rng) < spec.topic_mix) {
			d = static_cast<Dimension>(topic * spec.topic_vocab + uniform_below(rng, spec.topic_vocab));
		} else {
			d = static_cast<Dimension>(uniform_below(rng, spec.dims));
		}
		dims.insert(d);
	}
	std::vector<Entry> entries;
	for (auto d : dims) {
		// Positive, skewed weights in the spirit of TF-IDF.
		entries.push_back({d, 0.1 - std::log(1.0 - unit(rng))});
	}
	return entries;
}

std::vector<Entry> perturbed_copy(const std::vector<Entry> &seed, double noise, Rng &rng) {
	std::vector<Entry> out = seed;
	if (noise == 0.0) {
		return out;
	}
	std::normal_distribution<double> gauss(0.0, 1.0);
	std::vector<double> e(seed.size());
	double e_norm = 0.0;
	double s_norm = 0.0;
	for (std::size_t i = 0; i < seed.size(); ++i) {
		e[i] = gauss(rng);
		e_norm += e[i] * e[i];
		s_norm += seed[i].weight * seed[i].weight;
	}
	double scale = noise * std::sqrt(s_norm) / std::sqrt(e_norm);
	for (std::size_t i = 0; i < seed.size(); ++i) {
		out[i].weight += scale * e[i];
	}
	return out;
}

} // namespace

SyntheticCorpus generate_corpus(const SyntheticSpec &spec) {
	spec.validate();
	Rng rng(spec.seed);
	std::vector<VectorId> slots(spec.n);
	std::iota(slots.begin(), slots.end(), VectorId{0});
	std::shuffle(slots.begin(), slots.end(), rng);

	SyntheticCorpus corpus;
	corpus.cluster_of.assign(spec.n, -1);
	corpus.intra_cluster_floor = intra_cluster_floor(spec.noise);
	std::vector<SparseVector> vectors;
	vectors.reserve(spec.n);
	std::size_t next = 0;
	for (std::uint32_t c = 0; c < spec.cluster_count; ++c) {
		auto seed = background_entries(spec, rng);
		for (std::uint32_t m = 0; m < spec.cluster_size; ++m) {
			auto id = slots[next++];
			corpus.cluster_of[id] = static_cast<int>(c);
			vectors.emplace_back(id, perturbed_copy(seed, spec.noise, rng));
		}
	}
	while (next < spec.n) {
		vectors.emplace_back(slots[next++], background_entries(spec, rng));
	}
	corpus.data = Dataset(std::move(vectors));
	return corpus;
}

void write_manifest(std::ostream &out, const SyntheticSpec &spec, const SyntheticCorpus &corpus) {
	out << "n=" << spec.n << '\n'
	    << "dims=" << spec.dims << '\n'
	    << "cluster_count=" << spec.cluster_count << '\n'
	    << "cluster_size=" << spec.cluster_size << '\n'
	    << "noise=" << format_double(spec.noise) << '\n'
	    << "topics=" << spec.topics << '\n'
	    << "topic_vocab=" << spec.topic_vocab << '\n'
	    << "topic_mix=" << format_double(spec.topic_mix) << '\n'
	    << "min_nnz=" << spec.min_nnz << '\n'
	    << "max_nnz=" << spec.max_nnz << '\n'
	    << "seed=" << spec.seed << '\n'
	    << "intra_cluster_cosine_floor=" << format_double(corpus.intra_cluster_floor) << '\n';
}

} // namespace vsj
