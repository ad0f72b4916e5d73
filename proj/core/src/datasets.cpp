#include "irsplit/problems.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string_view>
#include <vector>

namespace irsplit {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

bool parse_double(std::string_view text, double& out) {
  if (text.empty()) return false;
  const std::string buf(text);
  char* end = nullptr;
  out = std::strtod(buf.c_str(), &end);
  return end == buf.c_str() + buf.size() && std::isfinite(out);
}

bool parse_index(std::string_view text, long long& out) {
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

}  // namespace

LabeledData parse_libsvm(std::istream& in, Index n_features) {
  std::vector<Eigen::Triplet<double>> entries;
  std::vector<double> raw_labels;
  std::vector<std::size_t> label_lines;
  long long width = 0;
  std::string line;
  std::size_t line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body(line);
    if (const auto hash = body.find('#'); hash != std::string_view::npos) {
      body = body.substr(0, hash);
    }
    body = trim(body);
    if (body.empty()) continue;

    std::istringstream tokens{std::string(body)};
    std::string token;
    tokens >> token;
    double label;
    if (!parse_double(token, label) || label != std::round(label)) {
      throw ParseError("libsvm: bad label '" + token + "'", line_no);
    }
    const Index row = static_cast<Index>(raw_labels.size());
    raw_labels.push_back(label);
    label_lines.push_back(line_no);

    std::set<long long> seen;
    while (tokens >> token) {
      const auto colon = token.find(':');
      if (colon == std::string::npos) {
        throw ParseError("libsvm: expected idx:val, got '" + token + "'",
                         line_no);
      }
      long long idx;
      double val;
      if (!parse_index(std::string_view(token).substr(0, colon), idx) ||
          idx < 1) {
        throw ParseError("libsvm: bad index in '" + token + "'", line_no);
      }
      if (!parse_double(std::string_view(token).substr(colon + 1), val)) {
        throw ParseError("libsvm: bad value in '" + token + "'", line_no);
      }
      if (!seen.insert(idx).second) {
        throw ParseError("libsvm: repeated index " + std::to_string(idx),
                         line_no);
      }
      if (n_features > 0 && idx > n_features) {
        throw ParseError("libsvm: index " + std::to_string(idx) +
                             " exceeds feature count " +
                             std::to_string(n_features),
                         line_no);
      }
      width = std::max(width, idx);
      entries.emplace_back(row, static_cast<Index>(idx - 1), val);
    }
  }

  std::set<double> distinct(raw_labels.begin(), raw_labels.end());
  auto within = [&](std::initializer_list<double> allowed) {
    for (double l : distinct) {
      if (std::find(allowed.begin(), allowed.end(), l) == allowed.end()) {
        return false;
      }
    }
    return true;
  };
  double negative;
  if (within({-1.0, 1.0})) {
    negative = -1.0;
  } else if (within({0.0, 1.0})) {
    negative = 0.0;
  } else if (within({1.0, 2.0})) {
    negative = 2.0;
  } else {
    for (std::size_t i = 0; i < raw_labels.size(); ++i) {
      if (raw_labels[i] != 1.0 && raw_labels[i] != -1.0) {
        throw ParseError("libsvm: labels must be {-1,+1}, {0,1} or {1,2}",
                         label_lines[i]);
      }
    }
    negative = -1.0;
  }

  LabeledData out;
  const Index rows = static_cast<Index>(raw_labels.size());
  const Index cols = n_features > 0 ? n_features : static_cast<Index>(width);
  out.labels.resize(rows);
  for (Index i = 0; i < rows; ++i) {
    out.labels[i] = raw_labels[i] == negative ? -1.0 : 1.0;
  }
  out.features.resize(rows, cols);
  out.features.setFromTriplets(entries.begin(), entries.end());
  out.features.makeCompressed();
  return out;
}

LogisticProblem load_libsvm(const std::filesystem::path& path, double nu,
                            Index n_features) {
  auto in = open_input(path);
  LabeledData data = parse_libsvm(in, n_features);
  return LogisticProblem(DesignMatrix(std::move(data.features)),
                         std::move(data.labels), nu);
}

void write_libsvm(std::ostream& out, const DesignMatrix& features,
                  const Point& labels) {
  if (labels.size() != features.rows()) {
    throw DimensionMismatch("write_libsvm: label count");
  }
  const SparseMatrix m = features.to_sparse();
  const auto old_precision = out.precision(17);
  for (Index i = 0; i < m.rows(); ++i) {
    out << (labels[i] > 0.0 ? "+1" : "-1");
    for (SparseMatrix::InnerIterator it(m, i); it; ++it) {
      out << ' ' << (it.col() + 1) << ':' << it.value();
    }
    out << '\n';
  }
  out.precision(old_precision);
}

DenseMatrix parse_dense_csv(std::istream& in, bool skip_header) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_header && line_no == 1) continue;
    if (trim(line).empty()) continue;
    std::vector<double> row;
    std::string_view rest(line);
    for (;;) {
      const auto comma = rest.find(',');
      const std::string_view cell = trim(rest.substr(0, comma));
      double val;
      if (!parse_double(cell, val)) {
        throw ParseError("csv: bad number '" + std::string(cell) + "'",
                         line_no);
      }
      row.push_back(val);
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError("csv: expected " + std::to_string(rows.front().size()) +
                           " columns, got " + std::to_string(row.size()),
                       line_no);
    }
    rows.push_back(std::move(row));
  }
  const Index m = static_cast<Index>(rows.size());
  const Index n = m > 0 ? static_cast<Index>(rows.front().size()) : 0;
  DenseMatrix out(m, n);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) out(i, j) = rows[i][j];
  }
  return out;
}

LassoProblem load_dense_csv(const std::filesystem::path& path_a,
                            const std::filesystem::path& path_b, double nu,
                            bool skip_header) {
  auto in_a = open_input(path_a);
  auto in_b = open_input(path_b);
  DenseMatrix a = parse_dense_csv(in_a, skip_header);
  const DenseMatrix b = parse_dense_csv(in_b, skip_header);
  if (b.cols() != 1) {
    throw DimensionMismatch("load_dense_csv: b must have one column, got " +
                            std::to_string(b.cols()));
  }
  if (b.rows() != a.rows()) {
    throw DimensionMismatch("load_dense_csv: A has " +
                            std::to_string(a.rows()) + " rows, b has " +
                            std::to_string(b.rows()));
  }
  return LassoProblem(DesignMatrix(std::move(a)), Point(b.col(0)), nu);
}

void write_dense_csv(std::ostream& out, const DenseMatrix& m) {
  const auto old_precision = out.precision(17);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
  out.precision(old_precision);
}

}  // namespace irsplit
