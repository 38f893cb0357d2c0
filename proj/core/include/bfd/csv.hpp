#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "bfd/matrix.hpp"

namespace bfd::csv {

// One parsed data row: leading values plus the trailing integer label.
struct LabeledRow {
  std::vector<double> values;
  int label = 0;
};

/// Reads "v1,v2,...,vn,label" rows. Blank lines are skipped. Throws
/// ParseError (malformed cell, missing label) or DataError (non-finite value,
/// empty file).
std::vector<LabeledRow> read_labeled_rows(const std::filesystem::path& path);
std::vector<LabeledRow> read_labeled_rows(std::istream& in);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

void write_labeled_rows(std::ostream& out, const Matrix& rows, std::span<const int> labels);
void write_labeled_rows(const std::filesystem::path& path, const Matrix& rows,
                        std::span<const int> labels);

// Feature matrix with labels in the last column.
struct LabeledMatrix {
  Matrix features;
  std::vector<int> labels;
};

LabeledMatrix read_feature_matrix(const std::filesystem::path& path);

}  // namespace bfd::csv
