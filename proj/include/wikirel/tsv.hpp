#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string_view>
#include <vector>

#include "wikirel/types.hpp"

namespace wikirel::tsv {

// Calls row_fn(line_number, fields) for every data row of a tab-separated
// file. Empty lines and lines starting with '#' are skipped. Throws
// ParseError when the file cannot be opened or a row does not have exactly
// n_fields fields.
void for_each_row(
    const std::filesystem::path& path, std::size_t n_fields,
    const std::function<void(std::size_t, const std::vector<std::string_view>&)>& row_fn);

std::uint64_t parse_u64(std::string_view field, const std::filesystem::path& path,
                        std::size_t line);
PageId parse_page_id(std::string_view field, const std::filesystem::path& path,
                     std::size_t line);
double parse_double(std::string_view field, const std::filesystem::path& path,
                    std::size_t line);

}  // namespace wikirel::tsv
