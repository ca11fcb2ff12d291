#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "psmds/datasets.hpp"
#include "psmds/evaluation.hpp"
#include "psmds/linalg.hpp"

namespace psmds {

/// Coordinates read from a CSV with a header row. A column named `label` is
/// kept verbatim and excluded from the coordinates; `#` lines are comments.
struct PointTable {
  std::vector<std::string> coordinate_columns;
  PointMatrix points;
  std::optional<std::vector<std::string>> labels;
};

PointTable read_point_csv(std::istream& in);
PointTable read_point_csv(const std::string& path);

/// Header from `columns` (plus `label` when given), 17 significant digits.
void write_point_csv(std::ostream& out, const PointMatrix& points,
                     const std::vector<std::string>& columns,
                     const std::optional<std::vector<std::string>>& labels = std::nullopt);
void write_point_csv(const std::string& path, const PointMatrix& points,
                     const std::vector<std::string>& columns,
                     const std::optional<std::vector<std::string>>& labels = std::nullopt);

/// `x,y,z,label` with the first label column (t for swissrolls).
void write_dataset_csv(std::ostream& out, const LabeledPointCloud& cloud);
void write_dataset_csv(const std::string& path, const LabeledPointCloud& cloud);

/// Whitespace-separated `word v1 ... vD`; every line must have the same D.
WordVectors read_word_vectors(std::istream& in);
WordVectors read_word_vectors(const std::string& path);
void write_word_vectors(const std::string& path, const std::vector<std::string>& words,
                        const PointMatrix& vectors);

/// `word_a word_b score` per line, tab or space separated; `#` lines skipped.
WordPairScores read_word_pairs(std::istream& in);
WordPairScores read_word_pairs(const std::string& path);

/// Integer class ids parsed from label strings ("3", "3.0", "-1").
std::vector<int> labels_as_classes(const std::vector<std::string>& labels);
/// Real-valued labels.
std::vector<double> labels_as_reals(const std::vector<std::string>& labels);

std::string format_number(double value);

}  // namespace psmds
