#pragma once

#include "vsj/dataset.hpp"
#include "vsj/lsh_index.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

namespace vsj {

inline constexpr std::uint64_t kDefaultExactLimit = 20000;

/// Exact pair classification at one threshold. Probabilities with a zero
/// denominator are reported as 0 and `zero_denominator` is set.
struct OracleProfile {
	double tau_cos = 0.0;
	std::uint64_t j = 0;
	std::uint64_t j_h = 0;
	std::uint64_t j_l = 0;
	std::uint64_t n_h = 0;
	std::uint64_t n_l = 0;
	double p_t = 0.0;
	double p_t_given_h = 0.0;
	double p_h_given_t = 0.0;
	double p_t_given_l = 0.0;
	bool zero_denominator = false;
};

std::uint64_t exact_join_size(const Dataset &data, double tau_cos, std::uint64_t limit = kDefaultExactLimit);
/// One O(n^2) pass for an ascending list of thresholds.
std::vector<std::uint64_t> exact_join_sizes(const Dataset &data, std::span<const double> taus,
                                            std::uint64_t limit = kDefaultExactLimit);

/// Strata come from table 0, or from any-table collisions when `virtual_buckets`.
OracleProfile profile(const LshIndex &index, const Dataset &data, double tau_cos, bool virtual_buckets = false,
                      std::uint64_t limit = kDefaultExactLimit);
std::vector<OracleProfile> profile_sweep(const LshIndex &index, const Dataset &data, std::span<const double> taus,
                                         bool virtual_buckets = false, std::uint64_t limit = kDefaultExactLimit);

/// |{(u, v) in U x V : cos(u, v) >= tau}|; self-pairs count when U and V share vectors.
std::uint64_t exact_cross_join_size(const Dataset &left, const Dataset &right, double tau_cos,
                                    std::uint64_t limit = kDefaultExactLimit);

enum class Regime { high, low, neither };

/// high: alpha >= log2(n)/n and beta < 1/n; low: alpha >= log2(n)/n and beta >= log2(n)/n.
Regime assumption_check(const OracleProfile &profile, std::uint64_t n);
std::string_view regime_name(Regime regime);

void write_profile_csv(std::ostream &out, std::span<const OracleProfile> profiles);

} // namespace vsj
