#pragma once

#include <filesystem>
#include <iosfwd>

#include "pnorm/feature_block.hpp"
#include "pnorm/sym_matrix.hpp"

namespace pnorm {

// Text formats, LF line endings, values printed with 17 significant digits:
//   SYMMAT <d>      followed by d rows of d values
//   FEAT <K> <N>    followed by K rows of N values
// Readers throw ParseError carrying the 1-based line number.

void write_symmat(std::ostream& out, const SymMatrix& m);
SymMatrix read_symmat(std::istream& in);
void write_features(std::ostream& out, const FeatureBlock& f);
FeatureBlock read_features(std::istream& in);

void write_symmat(const std::filesystem::path& path, const SymMatrix& m);
SymMatrix read_symmat(const std::filesystem::path& path);
void write_features(const std::filesystem::path& path, const FeatureBlock& f);
FeatureBlock read_features(const std::filesystem::path& path);

}  // namespace pnorm
