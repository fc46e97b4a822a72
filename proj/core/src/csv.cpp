#include "ugk/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace ugk {

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) throw Error(ErrorCode::Format, "cannot format double");
  return std::string(buf, ptr);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view text) {
  text = trim(text);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw Error(ErrorCode::Format, "not a number: '" + std::string(text) + "'");
  }
  return value;
}

long long parse_int(std::string_view text) {
  text = trim(text);
  long long value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw Error(ErrorCode::Format, "not an integer: '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split_fields(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

Matrix read_grid_csv(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  Matrix grid;
  std::size_t row_count = 0;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    auto fields = split_fields(view);
    if (row_count == 0) {
      grid.cols = fields.size();
    } else if (fields.size() != grid.cols) {
      throw Error(ErrorCode::DimensionMismatch,
                  path.string() + ": row " + std::to_string(row_count) + " has " +
                      std::to_string(fields.size()) + " columns, expected " +
                      std::to_string(grid.cols));
    }
    for (auto f : fields) grid.values.push_back(parse_double(f));
    ++row_count;
  }
  grid.rows = row_count;
  return grid;
}

void write_grid_csv(const std::filesystem::path& path, const Matrix& grid, std::string_view comment) {
  std::string out;
  out.reserve(grid.values.size() * 8);
  if (!comment.empty()) {
    out += "# ";
    out += comment;
    out += '\n';
  }
  for (std::size_t r = 0; r < grid.rows; ++r) {
    for (std::size_t c = 0; c < grid.cols; ++c) {
      if (c) out += ',';
      out += format_double(grid(r, c));
    }
    out += '\n';
  }
  write_text_file(path, out);
}

}  // namespace ugk
