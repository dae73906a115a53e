#include "vsj/index_snapshot.hpp"

#include "vsj/error.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace vsj {

namespace {

void expect_word(std::istream &in, const char *word) {
	std::string got;
	if (!(in >> got) || got != word) {
		throw InvalidInput(std::string("index snapshot: expected '") + word + "', got '" + got + "'");
	}
}

template <class T>
T read_value(std::istream &in, const char *what) {
	T value{};
	if (!(in >> value)) {
		throw InvalidInput(std::string("index snapshot: bad ") + what);
	}
	return value;
}

} // namespace

void write_index(std::ostream &out, const LshIndex &index) {
	out << "vsj-index 1\n";
	out << "tables " << index.table_count() << " vectors " << index.vector_count() << '\n';
	for (std::size_t t = 0; t < index.table_count(); ++t) {
		const auto &table = index.table(t);
		const auto &spec = table.spec();
		out << "table " << t << " k " << spec.k << " seed " << spec.seed << " hash_table "
		    << spec.table_idx << " buckets " << table.bucket_count() << '\n';
		for (const auto &bucket : table.buckets()) {
			out << std::hex << bucket.signature << std::dec << '\t';
			for (std::size_t i = 0; i < bucket.members.size(); ++i) {
				out << (i ? " " : "") << bucket.members[i];
			}
			out << '\n';
		}
	}
}

LshIndex read_index(std::istream &in) {
	expect_word(in, "vsj-index");
	if (read_value<int>(in, "version") != 1) {
		throw InvalidInput("index snapshot: unsupported version");
	}
	expect_word(in, "tables");
	auto ell = read_value<std::size_t>(in, "table count");
	expect_word(in, "vectors");
	read_value<std::size_t>(in, "vector count");
	std::vector<LshTable> tables;
	for (std::size_t t = 0; t < ell; ++t) {
		expect_word(in, "table");
		if (read_value<std::size_t>(in, "table number") != t) {
			throw InvalidInput("index snapshot: tables out of order");
		}
		TableSpec spec;
		expect_word(in, "k");
		spec.k = read_value<int>(in, "k");
		expect_word(in, "seed");
		spec.seed = read_value<std::uint64_t>(in, "seed");
		expect_word(in, "hash_table");
		spec.table_idx = read_value<int>(in, "hash table index");
		expect_word(in, "buckets");
		auto bucket_count = read_value<std::size_t>(in, "bucket count");
		in.ignore(1, '\n');
		std::vector<Bucket> buckets(bucket_count);
		for (auto &bucket : buckets) {
			std::string line;
			if (!std::getline(in, line)) {
				throw InvalidInput("index snapshot: truncated bucket list");
			}
			std::istringstream row(line);
			if (!(row >> std::hex >> bucket.signature >> std::dec)) {
				throw InvalidInput("index snapshot: bad bucket signature");
			}
			VectorId id;
			while (row >> id) {
				bucket.members.push_back(id);
			}
		}
		tables.push_back(LshTable::from_buckets(spec, std::move(buckets)));
	}
	return LshIndex(std::move(tables));
}

void save_index(const std::string &path, const LshIndex &index) {
	std::ofstream out(path, std::ios::binary);
	if (!out) {
		throw InvalidInput("cannot write " + path);
	}
	write_index(out, index);
}

LshIndex load_index(const std::string &path) {
	std::ifstream in(path);
	if (!in) {
		throw InvalidInput("cannot open " + path);
	}
	return read_index(in);
}

} // namespace vsj
