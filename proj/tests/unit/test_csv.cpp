#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "bfd/csv.hpp"
#include "bfd/error.hpp"

using namespace bfd;

TEST(Csv, SkipsBlankLinesAndTrimsCells) {
  std::istringstream in("1, 2 ,0\n\n  \n3,4,1\r\n");
  const auto rows = csv::read_labeled_rows(in);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].values, (std::vector<double>{1, 2}));
  EXPECT_EQ(rows[1].label, 1);
}

TEST(Csv, LabelMustBeNonNegativeInteger) {
  std::istringstream frac("1,2,0.5\n");
  EXPECT_THROW(csv::read_labeled_rows(frac), ParseError);
  std::istringstream neg("1,2,-1\n");
  EXPECT_THROW(csv::read_labeled_rows(neg), ParseError);
  std::istringstream lone("7\n");
  EXPECT_THROW(csv::read_labeled_rows(lone), ParseError);
}

TEST(Csv, InfinityIsDataError) {
  std::istringstream in("1,inf,0\n");
  EXPECT_THROW(csv::read_labeled_rows(in), DataError);
}

TEST(Csv, FormatDoubleRoundTrips) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> exponent(-300, 300);
  for (int i = 0; i < 1000; ++i) {
    const double v = std::pow(10.0, exponent(rng)) * (i % 2 ? -1 : 1);
    EXPECT_EQ(std::stod(csv::format_double(v)), v);
  }
  EXPECT_EQ(csv::format_double(0.5), "0.5");
  EXPECT_EQ(csv::format_double(3.0), "3");
}

TEST(Csv, FeatureMatrixRejectsRaggedRows) {
  const auto path = std::filesystem::temp_directory_path() / "bfd_csv_ragged.csv";
  {
    std::ofstream out(path);
    out << "1,2,0\n1,2,3,1\n";
  }
  EXPECT_THROW(csv::read_feature_matrix(path), ParseError);
}

TEST(Csv, WriteThenReadFeatureMatrix) {
  Matrix m(2, 3, std::vector<double>{0.125, 1e-300, -4, 7, 8, 9});
  std::vector<int> labels{2, 0};
  const auto path = std::filesystem::temp_directory_path() / "bfd_csv_matrix.csv";
  csv::write_labeled_rows(path, m, labels);
  const auto back = csv::read_feature_matrix(path);
  EXPECT_EQ(back.features, m);
  EXPECT_EQ(back.labels, labels);
}
