#include "ppr/bundle_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <string>

#include "ppr/errors.hpp"

namespace ppr {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

bool blank(const std::string& line) { return trim(line).empty(); }

std::ifstream open(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw IoError("cannot open '" + p.string() + "' for reading");
  return in;
}

}  // namespace

ParseError::ParseError(const std::string& what, std::size_t row, std::size_t column)
    : InvalidArgument("row " + std::to_string(row) + ", column " + std::to_string(column) + ": " +
                      what),
      row_(row),
      column_(column) {}

DimensionMismatch::DimensionMismatch(std::size_t effects_rows, std::size_t cov_rows)
    : InvalidArgument("dimension mismatch: effects file has " + std::to_string(effects_rows) +
                      " visits, covariance file is " + std::to_string(cov_rows) + "x" +
                      std::to_string(cov_rows)) {}

double parse_double(std::string_view token) {
  if (token.empty()) throw InvalidArgument("empty numeric field");
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (*first == '+') ++first;
  double x = 0.0;
  const auto res = std::from_chars(first, last, x);
  if (res.ec != std::errc{} || res.ptr != last) {
    throw InvalidArgument("not a number: '" + std::string(token) + "'");
  }
  if (!std::isfinite(x)) throw InvalidArgument("non-finite number: '" + std::string(token) + "'");
  return x;
}

EffectsTable parse_effects_csv(std::istream& is) {
  std::string line;
  std::size_t row = 0;
  while (std::getline(is, line)) {
    ++row;
    if (!blank(line)) break;
  }
  if (row == 0 || blank(line)) throw ParseError("effects file is empty", 1, 1);
  const auto header = split_fields(line);
  if (header.size() != 2 || header[0] != "t" || header[1] != "delta") {
    throw ParseError("effects header must be 't,delta'", row, 1);
  }
  EffectsTable out;
  while (std::getline(is, line)) {
    ++row;
    if (blank(line)) continue;
    const auto f = split_fields(line);
    if (f.size() != 2) throw ParseError("expected 2 fields, got " + std::to_string(f.size()), row, 1);
    for (std::size_t c = 0; c < 2; ++c) {
      try {
        (c == 0 ? out.t : out.delta).push_back(parse_double(f[c]));
      } catch (const InvalidArgument& e) {
        throw ParseError(e.what(), row, c + 1);
      }
    }
  }
  return out;
}

Matrix parse_covariance_csv(std::istream& is) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t row = 0;
  while (std::getline(is, line)) {
    ++row;
    if (blank(line)) continue;
    const auto f = split_fields(line);
    std::vector<double> r;
    for (std::size_t c = 0; c < f.size(); ++c) {
      try {
        r.push_back(parse_double(f[c]));
      } catch (const InvalidArgument& e) {
        throw ParseError(e.what(), row, c + 1);
      }
    }
    if (!rows.empty() && r.size() != rows.front().size()) {
      throw ParseError("row has " + std::to_string(r.size()) + " values, expected " +
                           std::to_string(rows.front().size()),
                       row, r.size());
    }
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw ParseError("covariance file is empty", 1, 1);
  if (rows.front().size() != rows.size()) {
    throw ParseError("covariance matrix must be square, got " + std::to_string(rows.size()) +
                         " rows of " + std::to_string(rows.front().size()),
                     rows.size(), rows.front().size());
  }
  return Matrix::from_rows(rows);
}

EstimateBundle load_bundle(const std::filesystem::path& effects,
                           const std::filesystem::path& covariance) {
  auto ein = open(effects);
  auto cin = open(covariance);
  auto table = parse_effects_csv(ein);
  auto matrix = parse_covariance_csv(cin);
  if (table.t.size() != matrix.size()) throw DimensionMismatch(table.t.size(), matrix.size());
  TimeGrid grid(std::move(table.t));
  EffectCovariance sigma(std::move(grid), std::move(matrix));
  return EstimateBundle(std::move(table.delta), std::move(sigma));
}

}  // namespace ppr
