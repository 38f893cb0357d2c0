#include "bfd/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>

#include "bfd/error.hpp"

namespace bfd::csv {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

double parse_real(std::string_view cell, std::size_t line) {
  cell = trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty()) {
    throw ParseError(line, "cannot parse value '" + std::string(cell) + "'");
  }
  if (!std::isfinite(v)) {
    throw DataError("line " + std::to_string(line) + ": non-finite value '" +
                    std::string(cell) + "'");
  }
  return v;
}

int parse_label(std::string_view cell, std::size_t line) {
  cell = trim(cell);
  int v = 0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty()) {
    throw ParseError(line, "label '" + std::string(cell) + "' is not an integer");
  }
  if (v < 0) throw ParseError(line, "negative label");
  return v;
}

}  // namespace

std::vector<LabeledRow> read_labeled_rows(std::istream& in) {
  std::vector<LabeledRow> rows;
  std::string text;
  std::size_t line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    std::string_view line = trim(text);
    if (line.empty()) continue;

    std::vector<std::string_view> cells;
    std::size_t pos = 0;
    while (true) {
      auto comma = line.find(',', pos);
      cells.push_back(line.substr(pos, comma - pos));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    if (cells.size() < 2) throw ParseError(line_no, "expected at least one value and a label");

    LabeledRow row;
    row.values.reserve(cells.size() - 1);
    for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
      row.values.push_back(parse_real(cells[i], line_no));
    }
    row.label = parse_label(cells.back(), line_no);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError("empty file: no records");
  return rows;
}

std::vector<LabeledRow> read_labeled_rows(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return read_labeled_rows(in);
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void write_labeled_rows(std::ostream& out, const Matrix& rows, std::span<const int> labels) {
  if (labels.size() != rows.rows()) throw ArgumentError("label count does not match row count");
  for (std::size_t r = 0; r < rows.rows(); ++r) {
    for (double v : rows.row(r)) out << format_double(v) << ',';
    out << labels[r] << '\n';
  }
}

void write_labeled_rows(const std::filesystem::path& path, const Matrix& rows,
                        std::span<const int> labels) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  write_labeled_rows(out, rows, labels);
}

LabeledMatrix read_feature_matrix(const std::filesystem::path& path) {
  auto rows = read_labeled_rows(path);
  LabeledMatrix out;
  const std::size_t width = rows.front().values.size();
  std::vector<double> data;
  data.reserve(rows.size() * width);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].values.size() != width) {
      throw ParseError(i + 1, "feature row width differs from first row");
    }
    data.insert(data.end(), rows[i].values.begin(), rows[i].values.end());
    out.labels.push_back(rows[i].label);
  }
  out.features = Matrix(rows.size(), width, std::move(data));
  return out;
}

}  // namespace bfd::csv
