#pragma once

#include <filesystem>
#include <iosfwd>
#include <utility>

#include "cosntf/tensor.hpp"

namespace cosntf {

/// .t3t: a header line "t3 m n p" followed by the m*n*p entries in storage
/// order, written with 17 significant digits (scientific) so the round trip is exact.
void write_t3t(std::ostream& os, const Tensor3& t);
void write_t3t(const std::filesystem::path& path, const Tensor3& t);
/// Throws FormatError on a bad header, a count mismatch or non-finite values.
Tensor3 read_t3t(std::istream& is);
Tensor3 read_t3t(const std::filesystem::path& path);

/// .idx: "I: i1,i2,..." and "J: j1,..." lines, 1-based.
void write_idx(std::ostream& os, const IndexList& I, const IndexList& J);
void write_idx(const std::filesystem::path& path, const IndexList& I, const IndexList& J);
std::pair<IndexList, IndexList> read_idx(std::istream& is);
std::pair<IndexList, IndexList> read_idx(const std::filesystem::path& path);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

}  // namespace cosntf
