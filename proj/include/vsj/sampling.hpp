#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace vsj {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; used for seed derivation and counter-based hashing.
constexpr std::uint64_t mix64(std::uint64_t x) {
	x += 0x9e3779b97f4a7c15ULL;
	x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
	x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
	return x ^ (x >> 31);
}

/// Independent stream seed for sub-procedure `stream` of a run seeded with `seed`.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
	return mix64(seed ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

inline std::uint64_t uniform_below(Rng &rng, std::uint64_t bound) {
	return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(rng);
}

/// Uniform unordered pair of distinct indices in [0, n); n >= 2.
inline std::pair<std::uint32_t, std::uint32_t> draw_distinct_pair(Rng &rng, std::uint64_t n) {
	auto a = uniform_below(rng, n);
	auto b = uniform_below(rng, n - 1);
	if (b >= a) {
		++b;
	}
	return {static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b)};
}

/// Draws an index with probability proportional to integer weights, by binary
/// search over the cumulative sums.
class WeightedIndex {
public:
	WeightedIndex() = default;
	explicit WeightedIndex(const std::vector<std::uint64_t> &weights);

	std::uint64_t total() const { return cumulative_.empty() ? 0 : cumulative_.back(); }
	std::size_t draw(Rng &rng) const;

private:
	std::vector<std::uint64_t> cumulative_;
};

} // namespace vsj
