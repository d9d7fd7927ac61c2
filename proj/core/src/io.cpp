#include "pnorm/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "pnorm/errors.hpp"

namespace pnorm {

namespace {

void write_value(std::ostream& out, double v) {
  if (!std::isfinite(v)) throw DomainError("write: refusing to serialize a non-finite value");
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  out.write(buf, res.ptr - buf);
}

void write_rows(std::ostream& out, const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out.put(' ');
      write_value(out, m(i, j));
    }
    out.put('\n');
  }
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    if (pos >= line.size()) break;
    std::size_t end = pos;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t') ++end;
    tokens.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return tokens;
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++number_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }
  std::size_t number() const { return number_; }

 private:
  std::istream& in_;
  std::size_t number_ = 0;
};

std::size_t parse_size(std::string_view tok, std::size_t line) {
  std::size_t v = 0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size() || v == 0) {
    throw ParseError("expected a positive integer, got '" + std::string(tok) + "'", line);
  }
  return v;
}

double parse_value(std::string_view tok, std::size_t line) {
  double v = 0.0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
    throw ParseError("malformed number '" + std::string(tok) + "'", line);
  }
  if (!std::isfinite(v)) throw ParseError("non-finite value '" + std::string(tok) + "'", line);
  return v;
}

Matrix read_rows(LineReader& reader, std::size_t rows, std::size_t cols) {
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  std::string line;
  for (std::size_t i = 0; i < rows; ++i) {
    if (!reader.next(line)) {
      throw ParseError("expected " + std::to_string(rows) + " data rows, found " +
                           std::to_string(i),
                       reader.number() + 1);
    }
    auto tokens = split(line);
    if (tokens.size() != cols) {
      throw ParseError("expected " + std::to_string(cols) + " values, found " +
                           std::to_string(tokens.size()),
                       reader.number());
    }
    for (std::size_t j = 0; j < cols; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          parse_value(tokens[j], reader.number());
    }
  }
  while (reader.next(line)) {
    if (!split(line).empty()) throw ParseError("unexpected trailing data", reader.number());
  }
  return m;
}

std::vector<std::string_view> read_header(LineReader& reader, std::string& line,
                                          std::string_view tag, std::size_t fields) {
  if (!reader.next(line)) throw ParseError("empty input, expected " + std::string(tag), 1);
  auto tokens = split(line);
  if (tokens.size() != fields || tokens[0] != tag) {
    throw ParseError("malformed header, expected '" + std::string(tag) + "'", reader.number());
  }
  return tokens;
}

}  // namespace

void write_symmat(std::ostream& out, const SymMatrix& m) {
  out << "SYMMAT " << m.dim() << '\n';
  write_rows(out, m.matrix());
}

SymMatrix read_symmat(std::istream& in) {
  LineReader reader(in);
  std::string header;
  auto tokens = read_header(reader, header, "SYMMAT", 2);
  const std::size_t d = parse_size(tokens[1], 1);
  Matrix m = read_rows(reader, d, d);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      if (m(i, j) != m(j, i)) {
        throw ParseError("matrix is not symmetric at column " + std::to_string(j + 1),
                         static_cast<std::size_t>(i) + 2);
      }
    }
  }
  return SymMatrix(m);
}

void write_features(std::ostream& out, const FeatureBlock& f) {
  out << "FEAT " << f.channels() << ' ' << f.count() << '\n';
  write_rows(out, f.matrix());
}

FeatureBlock read_features(std::istream& in) {
  LineReader reader(in);
  std::string header;
  auto tokens = read_header(reader, header, "FEAT", 3);
  const std::size_t k = parse_size(tokens[1], 1);
  const std::size_t n = parse_size(tokens[2], 1);
  return FeatureBlock(read_rows(reader, k, n));
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

}  // namespace

void write_symmat(const std::filesystem::path& path, const SymMatrix& m) {
  auto out = open_out(path);
  write_symmat(out, m);
}

SymMatrix read_symmat(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_symmat(in);
}

void write_features(const std::filesystem::path& path, const FeatureBlock& f) {
  auto out = open_out(path);
  write_features(out, f);
}

FeatureBlock read_features(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_features(in);
}

}  // namespace pnorm
