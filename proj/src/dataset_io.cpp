#include "vsj/dataset.hpp"

#include "vsj/error.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace vsj {

Dataset::Dataset(std::vector<SparseVector> vectors) {
	std::sort(vectors.begin(), vectors.end(),
	          [](const SparseVector &a, const SparseVector &b) { return a.id() < b.id(); });
	for (std::size_t i = 0; i < vectors.size(); ++i) {
		if (vectors[i].id() != i) {
			throw InvalidInput("vector ids must be unique and dense in [0, n); missing or duplicate id near " +
			                   std::to_string(i));
		}
		max_dim_ = std::max(max_dim_, vectors[i].max_dim());
	}
	vectors_ = std::move(vectors);
}

std::uint64_t Dataset::pair_count() const {
	std::uint64_t n = vectors_.size();
	return n < 2 ? 0 : n * (n - 1) / 2;
}

const SparseVector &Dataset::at(VectorId id) const {
	if (id >= vectors_.size()) {
		throw InvalidInput("unknown vector id " + std::to_string(id));
	}
	return vectors_[id];
}

namespace {

template <class T>
T parse_number(std::string_view text, std::size_t line_no) {
	T value{};
	auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
	if (ec != std::errc() || ptr != text.data() + text.size()) {
		throw InvalidInput("line " + std::to_string(line_no) + ": cannot parse '" + std::string(text) + "'");
	}
	return value;
}

} // namespace

Dataset read_sparse_vectors(std::istream &in) {
	std::vector<SparseVector> vectors;
	std::string line;
	std::size_t line_no = 0;
	while (std::getline(in, line)) {
		++line_no;
		if (!line.empty() && line.back() == '\r') {
			line.pop_back();
		}
		if (line.empty() || line.front() == '#') {
			continue;
		}
		auto tab = line.find('\t');
		if (tab == std::string::npos) {
			throw InvalidInput("line " + std::to_string(line_no) + ": expected id<TAB>entries");
		}
		auto id = parse_number<VectorId>(std::string_view(line).substr(0, tab), line_no);
		std::vector<Entry> entries;
		std::string_view rest = std::string_view(line).substr(tab + 1);
		while (!rest.empty()) {
			auto space = rest.find(' ');
			std::string_view token = rest.substr(0, space);
			rest = space == std::string_view::npos ? std::string_view() : rest.substr(space + 1);
			if (token.empty()) {
				continue;
			}
			auto colon = token.find(':');
			if (colon == std::string_view::npos) {
				throw InvalidInput("line " + std::to_string(line_no) + ": expected dim:weight, got '" +
				                   std::string(token) + "'");
			}
			entries.push_back({parse_number<Dimension>(token.substr(0, colon), line_no),
			                   parse_number<double>(token.substr(colon + 1), line_no)});
		}
		vectors.emplace_back(id, std::move(entries));
	}
	return Dataset(std::move(vectors));
}

Dataset load_sparse_vectors(const std::string &path) {
	std::ifstream in(path);
	if (!in) {
		throw InvalidInput("cannot open " + path);
	}
	return read_sparse_vectors(in);
}

std::string format_double(double value) {
	char buf[64];
	auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
	return std::string(buf, ptr);
}

void write_sparse_vectors(std::ostream &out, const Dataset &data) {
	for (const auto &v : data.vectors()) {
		out << v.id() << '\t';
		bool first = true;
		for (const auto &e : v.entries()) {
			if (!first) {
				out << ' ';
			}
			first = false;
			out << e.dim << ':' << format_double(e.weight);
		}
		out << '\n';
	}
}

void save_sparse_vectors(const std::string &path, const Dataset &data) {
	std::ofstream out(path, std::ios::binary);
	if (!out) {
		throw InvalidInput("cannot write " + path);
	}
	write_sparse_vectors(out, data);
}

} // namespace vsj
