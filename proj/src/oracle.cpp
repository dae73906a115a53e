#include "vsj/oracle.hpp"

#include "vsj/error.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

namespace vsj {

namespace {

void check_limit(std::uint64_t n, std::uint64_t limit) {
	if (n > limit) {
		throw OracleRefusal("exact oracle refuses n = " + std::to_string(n) + " (limit " + std::to_string(limit) +
		                    ")");
	}
}

void check_ascending(std::span<const double> taus) {
	for (std::size_t i = 1; i < taus.size(); ++i) {
		if (!(taus[i] > taus[i - 1])) {
			throw InvalidInput("thresholds must be strictly ascending");
		}
	}
}

// Calls fn(u, v, cosine) for every unordered pair. u is scattered into a dense
// buffer; the dot product then sums over v's entries in dimension order, which
// reproduces the merge-based dot() exactly.
template <class Fn>
void for_each_pair(const Dataset &data, Fn &&fn) {
	std::vector<double> dense(static_cast<std::size_t>(data.max_dim()) + 1, 0.0);
	const auto n = static_cast<VectorId>(data.size());
	for (VectorId u = 0; u < n; ++u) {
		const auto &a = data[u];
		for (const auto &e : a.entries()) {
			dense[e.dim] = e.weight;
		}
		for (VectorId v = u + 1; v < n; ++v) {
			const auto &b = data[v];
			double d = 0.0;
			for (const auto &e : b.entries()) {
				d += dense[e.dim] * e.weight;
			}
			fn(u, v, cosine_from_dot(d, a.squared_norm(), b.squared_norm()));
		}
		for (const auto &e : a.entries()) {
			dense[e.dim] = 0.0;
		}
	}
}

// Number of thresholds satisfied by a pair of cosine c: taus[0..idx) <= c.
std::size_t satisfied(std::span<const double> taus, double c) {
	return static_cast<std::size_t>(std::upper_bound(taus.begin(), taus.end(), c) - taus.begin());
}

std::vector<std::uint64_t> suffix_counts(const std::vector<std::uint64_t> &hist, std::size_t taus) {
	// hist[idx] counts pairs satisfying exactly the first idx thresholds.
	std::vector<std::uint64_t> out(taus, 0);
	std::uint64_t running = 0;
	for (std::size_t j = taus; j-- > 0;) {
		running += hist[j + 1];
		out[j] = running;
	}
	return out;
}

double ratio(std::uint64_t num, std::uint64_t den, bool &zero) {
	if (den == 0) {
		zero = true;
		return 0.0;
	}
	return static_cast<double>(num) / static_cast<double>(den);
}

} // namespace

std::vector<std::uint64_t> exact_join_sizes(const Dataset &data, std::span<const double> taus, std::uint64_t limit) {
	check_limit(data.size(), limit);
	check_ascending(taus);
	std::vector<std::uint64_t> hist(taus.size() + 1, 0);
	for_each_pair(data, [&](VectorId, VectorId, double c) { ++hist[satisfied(taus, c)]; });
	return suffix_counts(hist, taus.size());
}

std::uint64_t exact_join_size(const Dataset &data, double tau_cos, std::uint64_t limit) {
	double taus[] = {tau_cos};
	return exact_join_sizes(data, taus, limit).front();
}

std::vector<OracleProfile> profile_sweep(const LshIndex &index, const Dataset &data, std::span<const double> taus,
                                         bool virtual_buckets, std::uint64_t limit) {
	check_limit(data.size(), limit);
	check_ascending(taus);
	if (index.vector_count() != data.size()) {
		throw InvalidInput("index and dataset sizes differ");
	}
	std::vector<std::uint64_t> all(taus.size() + 1, 0);
	std::vector<std::uint64_t> high(taus.size() + 1, 0);
	std::uint64_t n_h = 0;
	const auto &first = index.table(0);
	for_each_pair(data, [&](VectorId u, VectorId v, double c) {
		auto idx = satisfied(taus, c);
		++all[idx];
		bool co = virtual_buckets ? index.same_virtual_bucket(u, v) : first.same_bucket(u, v);
		if (co) {
			++high[idx];
			++n_h;
		}
	});
	auto j = suffix_counts(all, taus.size());
	auto j_h = suffix_counts(high, taus.size());
	const std::uint64_t total = data.pair_count();
	std::vector<OracleProfile> out;
	for (std::size_t i = 0; i < taus.size(); ++i) {
		OracleProfile p;
		p.tau_cos = taus[i];
		p.j = j[i];
		p.j_h = j_h[i];
		p.j_l = j[i] - j_h[i];
		p.n_h = n_h;
		p.n_l = total - n_h;
		p.p_t = ratio(p.j, total, p.zero_denominator);
		p.p_t_given_h = ratio(p.j_h, p.n_h, p.zero_denominator);
		p.p_h_given_t = ratio(p.j_h, p.j, p.zero_denominator);
		p.p_t_given_l = ratio(p.j_l, p.n_l, p.zero_denominator);
		out.push_back(p);
	}
	return out;
}

OracleProfile profile(const LshIndex &index, const Dataset &data, double tau_cos, bool virtual_buckets,
                      std::uint64_t limit) {
	double taus[] = {tau_cos};
	return profile_sweep(index, data, taus, virtual_buckets, limit).front();
}

std::uint64_t exact_cross_join_size(const Dataset &left, const Dataset &right, double tau_cos, std::uint64_t limit) {
	check_limit(std::max(left.size(), right.size()), limit);
	std::vector<double> dense(static_cast<std::size_t>(std::max(left.max_dim(), right.max_dim())) + 1, 0.0);
	std::uint64_t count = 0;
	for (const auto &a : left.vectors()) {
		for (const auto &e : a.entries()) {
			dense[e.dim] = e.weight;
		}
		for (const auto &b : right.vectors()) {
			double d = 0.0;
			for (const auto &e : b.entries()) {
				d += dense[e.dim] * e.weight;
			}
			if (cosine_from_dot(d, a.squared_norm(), b.squared_norm()) >= tau_cos) {
				++count;
			}
		}
		for (const auto &e : a.entries()) {
			dense[e.dim] = 0.0;
		}
	}
	return count;
}

Regime assumption_check(const OracleProfile &profile, std::uint64_t n) {
	if (n < 2) {
		return Regime::neither;
	}
	double nd = static_cast<double>(n);
	double log_over_n = std::log2(nd) / nd;
	double alpha = profile.p_t_given_h;
	double beta = profile.p_t_given_l;
	if (alpha < log_over_n) {
		return Regime::neither;
	}
	if (beta < 1.0 / nd) {
		return Regime::high;
	}
	if (beta >= log_over_n) {
		return Regime::low;
	}
	return Regime::neither;
}

std::string_view regime_name(Regime regime) {
	switch (regime) {
	case Regime::high:
		return "high";
	case Regime::low:
		return "low";
	case Regime::neither:
		return "neither";
	}
	return "neither";
}

void write_profile_csv(std::ostream &out, std::span<const OracleProfile> profiles) {
	out << "tau,J,J_H,J_L,N_H,N_L,p_T,p_T_given_H,p_H_given_T,p_T_given_L\n";
	for (const auto &p : profiles) {
		out << format_double(p.tau_cos) << ',' << p.j << ',' << p.j_h << ',' << p.j_l << ',' << p.n_h << ','
		    << p.n_l << ',' << format_double(p.p_t) << ',' << format_double(p.p_t_given_h) << ','
		    << format_double(p.p_h_given_t) << ',' << format_double(p.p_t_given_l) << '\n';
	}
}

} // namespace vsj
