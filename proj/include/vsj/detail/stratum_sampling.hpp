#pragma once

#include "vsj/estimators.hpp"

namespace vsj::detail {

// Shared loops of the two stratum samplers. The pair source, stratum membership
// and the similarity predicate are supplied by the caller so the same code serves
// self-joins, virtual buckets and general joins.

template <class DrawPair, class IsTrue>
SampleHResult sample_high_stratum(double high_pairs, std::uint64_t m_h, Rng &rng, DrawPair &&draw,
                                  IsTrue &&is_true) {
	SampleHResult out;
	if (high_pairs <= 0.0) {
		return out;
	}
	for (std::uint64_t i = 0; i < m_h; ++i) {
		auto [u, v] = draw(rng);
		++out.sim_evals;
		if (is_true(u, v)) {
			++out.n_true;
		}
	}
	out.samples = m_h;
	out.j_h_hat = static_cast<double>(out.n_true) * high_pairs / static_cast<double>(m_h);
	return out;
}

template <class DrawPair, class InHigh, class IsTrue>
SampleLResult sample_low_stratum(double low_pairs, const ResolvedParams &params, Rng &rng, DrawPair &&draw,
                                 InHigh &&in_high, IsTrue &&is_true) {
	SampleLResult out;
	if (low_pairs <= 0.0) {
		return out;
	}
	std::uint64_t i = 0;
	std::uint64_t n_l = 0;
	while (n_l < params.delta && i < params.m_l) {
		auto [u, v] = draw(rng);
		if (in_high(u, v)) {
			++out.rejected;
			if (params.count_rejected) {
				++i;
			}
			continue;
		}
		++out.sim_evals;
		if (is_true(u, v)) {
			++n_l;
		}
		++i;
	}
	out.n_true = n_l;
	out.samples = i;
	auto count = static_cast<double>(n_l);
	if (i >= params.m_l) {
		out.safe = true;
		auto full_scale = low_pairs / static_cast<double>(params.m_l);
		switch (params.dampening.kind) {
		case DampeningKind::none:
			out.j_l_hat = count;
			break;
		case DampeningKind::adaptive:
			out.j_l_hat = count * (count / static_cast<double>(params.delta)) * full_scale;
			break;
		case DampeningKind::fixed:
			out.j_l_hat = count * params.dampening.factor * full_scale;
			break;
		}
	} else {
		out.j_l_hat = count * low_pairs / static_cast<double>(i);
	}
	return out;
}

} // namespace vsj::detail
