#include "psmds/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "psmds/errors.hpp"

namespace psmds {

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot open " + path + " for writing");
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream stream(line);
  while (std::getline(stream, cell, sep)) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == sep) cells.emplace_back();
  return cells;
}

double parse_double(const std::string& cell, std::size_t line_no) {
  double v = 0.0;
  const char* begin = cell.data();
  const char* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v))
    throw InvalidArgument("line " + std::to_string(line_no) + ": not a finite number: '" + cell + "'");
  return v;
}

}  // namespace

std::string format_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

PointTable read_point_csv(std::istream& in) {
  std::string line;
  std::vector<std::string> header;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    header = split(t, ',');
    break;
  }
  if (header.empty()) throw InvalidArgument("CSV has no header row");

  std::optional<std::size_t> label_col;
  std::vector<std::string> coord_cols;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "label") {
      label_col = c;
    } else {
      coord_cols.push_back(header[c]);
    }
  }
  if (coord_cols.empty()) throw InvalidArgument("CSV has no coordinate columns");

  std::vector<double> values;
  std::vector<std::string> labels;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto cells = split(t, ',');
    if (cells.size() != header.size())
      throw InvalidArgument("line " + std::to_string(line_no) + ": expected " +
                            std::to_string(header.size()) + " fields, found " +
                            std::to_string(cells.size()));
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (label_col && c == *label_col) {
        labels.push_back(cells[c]);
      } else {
        values.push_back(parse_double(cells[c], line_no));
      }
    }
    ++rows;
  }
  if (rows == 0) throw InvalidArgument("CSV has no data rows");

  Matrix m(rows, coord_cols.size());
  std::copy(values.begin(), values.end(), m.data().begin());
  PointTable table{coord_cols, PointMatrix(std::move(m)), std::nullopt};
  if (label_col) table.labels = std::move(labels);
  return table;
}

PointTable read_point_csv(const std::string& path) {
  auto in = open_in(path);
  return read_point_csv(in);
}

void write_point_csv(std::ostream& out, const PointMatrix& points,
                     const std::vector<std::string>& columns,
                     const std::optional<std::vector<std::string>>& labels) {
  if (columns.size() != points.dim()) throw InvalidArgument("column names do not match dimension");
  if (labels && labels->size() != points.n_points())
    throw InvalidArgument("label count does not match point count");
  for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c];
  if (labels) out << ",label";
  out << '\n';
  for (std::size_t i = 0; i < points.n_points(); ++i) {
    for (std::size_t l = 0; l < points.dim(); ++l) out << (l ? "," : "") << format_number(points(i, l));
    if (labels) out << ',' << (*labels)[i];
    out << '\n';
  }
}

void write_point_csv(const std::string& path, const PointMatrix& points,
                     const std::vector<std::string>& columns,
                     const std::optional<std::vector<std::string>>& labels) {
  auto out = open_out(path);
  write_point_csv(out, points, columns, labels);
}

void write_dataset_csv(std::ostream& out, const LabeledPointCloud& cloud) {
  std::vector<std::string> labels;
  labels.reserve(cloud.points.n_points());
  for (std::size_t i = 0; i < cloud.points.n_points(); ++i) {
    const double v = cloud.labels(i, 0);
    labels.push_back(v == std::floor(v) && std::abs(v) < 1e15
                         ? std::to_string(static_cast<long long>(v))
                         : format_number(v));
  }
  std::vector<std::string> columns{"x", "y", "z"};
  columns.resize(cloud.points.dim());
  write_point_csv(out, cloud.points, columns, labels);
}

void write_dataset_csv(const std::string& path, const LabeledPointCloud& cloud) {
  auto out = open_out(path);
  write_dataset_csv(out, cloud);
}

static bool is_count(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

WordVectors read_word_vectors(std::istream& in) {
  std::vector<std::string> words;
  std::vector<double> values;
  std::size_t dim = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string word;
    if (!(fields >> word)) continue;
    std::vector<std::string> tokens;
    for (std::string tok; fields >> tok;) tokens.push_back(tok);
    if (tokens.empty()) continue;
    // word2vec-style "vocab dim" header
    if (line_no == 1 && tokens.size() == 1 && is_count(word) && is_count(tokens[0])) continue;
    std::vector<double> row;
    for (const auto& tok : tokens) row.push_back(parse_double(tok, line_no));
    if (dim == 0) dim = row.size();
    if (row.size() != dim)
      throw InvalidArgument("line " + std::to_string(line_no) + ": expected " +
                            std::to_string(dim) + " components");
    words.push_back(word);
    values.insert(values.end(), row.begin(), row.end());
  }
  if (words.empty()) throw InvalidArgument("no word vectors found");
  Matrix m(words.size(), dim);
  std::copy(values.begin(), values.end(), m.data().begin());
  return WordVectors(std::move(words), std::move(m));
}

WordVectors read_word_vectors(const std::string& path) {
  auto in = open_in(path);
  return read_word_vectors(in);
}

void write_word_vectors(const std::string& path, const std::vector<std::string>& words,
                        const PointMatrix& vectors) {
  if (words.size() != vectors.n_points()) throw InvalidArgument("word count does not match vectors");
  auto out = open_out(path);
  for (std::size_t i = 0; i < words.size(); ++i) {
    out << words[i];
    for (std::size_t l = 0; l < vectors.dim(); ++l) out << ' ' << format_number(vectors(i, l));
    out << '\n';
  }
}

WordPairScores read_word_pairs(std::istream& in) {
  WordPairScores pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::istringstream fields(t);
    WordPair p;
    std::string score;
    if (!(fields >> p.first >> p.second >> score))
      throw InvalidArgument("line " + std::to_string(line_no) + ": expected 'word word score'");
    p.human_score = parse_double(score, line_no);
    pairs.push_back(std::move(p));
  }
  return pairs;
}

WordPairScores read_word_pairs(const std::string& path) {
  auto in = open_in(path);
  return read_word_pairs(in);
}

std::vector<double> labels_as_reals(const std::vector<std::string>& labels) {
  std::vector<double> out;
  out.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) out.push_back(parse_double(labels[i], i + 1));
  return out;
}

std::vector<int> labels_as_classes(const std::vector<std::string>& labels) {
  std::vector<int> out;
  out.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double v = parse_double(labels[i], i + 1);
    if (v != std::floor(v)) throw InvalidArgument("label '" + labels[i] + "' is not an integer class id");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

}  // namespace psmds
