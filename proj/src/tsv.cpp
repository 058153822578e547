#include "wikirel/tsv.hpp"

#include <charconv>
#include <fstream>
#include <string>

namespace wikirel::tsv {

namespace {

std::string where(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line);
}

}  // namespace

void for_each_row(
    const std::filesystem::path& path, std::size_t n_fields,
    const std::function<void(std::size_t, const std::vector<std::string_view>&)>& row_fn) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());

  std::string line;
  std::vector<std::string_view> fields;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;

    fields.clear();
    std::string_view rest = line;
    while (true) {
      auto tab = rest.find('\t');
      if (tab == std::string_view::npos) {
        fields.push_back(rest);
        break;
      }
      fields.push_back(rest.substr(0, tab));
      rest.remove_prefix(tab + 1);
    }
    if (fields.size() != n_fields) {
      throw ParseError(where(path, line_no) + ": expected " + std::to_string(n_fields) +
                       " tab-separated fields, got " + std::to_string(fields.size()));
    }
    row_fn(line_no, fields);
  }
}

std::uint64_t parse_u64(std::string_view field, const std::filesystem::path& path,
                        std::size_t line) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw ParseError(where(path, line) + ": not a non-negative integer: '" +
                     std::string(field) + "'");
  }
  return value;
}

PageId parse_page_id(std::string_view field, const std::filesystem::path& path,
                     std::size_t line) {
  std::uint64_t value = parse_u64(field, path, line);
  if (value == 0 || value > 0xffffffffull) {
    throw ParseError(where(path, line) + ": page id out of range: '" + std::string(field) +
                     "'");
  }
  return static_cast<PageId>(value);
}

double parse_double(std::string_view field, const std::filesystem::path& path,
                    std::size_t line) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw ParseError(where(path, line) + ": not a number: '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace wikirel::tsv
