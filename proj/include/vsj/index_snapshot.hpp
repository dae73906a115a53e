#pragma once

#include "vsj/lsh_index.hpp"

#include <iosfwd>
#include <string>

namespace vsj {

// Line-based snapshot:
//   vsj-index 1
//   tables <ell> vectors <n>
//   table <t> k <k> seed <seed> hash_table <idx> buckets <n_g>
//   <signature hex><TAB><id> <id> ...      (one line per bucket, signature order)
void write_index(std::ostream &out, const LshIndex &index);
LshIndex read_index(std::istream &in);

void save_index(const std::string &path, const LshIndex &index);
LshIndex load_index(const std::string &path);

} // namespace vsj
