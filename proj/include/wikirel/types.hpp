#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace wikirel {

using PageId = std::uint32_t;

enum class PageKind : std::uint8_t { Article = 0, Category = 1, Redirect = 2 };

const char* to_string(PageKind kind);

struct Page {
  PageId id = 0;
  PageKind kind = PageKind::Article;
  std::string title;

  auto operator<=>(const Page&) const = default;
};

// Directed edge between page ids; meaning depends on the edge list it lives in.
struct Edge {
  PageId from = 0;
  PageId to = 0;

  auto operator<=>(const Edge&) const = default;
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed file contents: bad row syntax, wrong column count, non-numeric ids.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Structurally invalid data: unknown ids, duplicate pages, redirect cycles,
// corrupt snapshots.
class DataError : public Error {
 public:
  using Error::Error;
};

// Statistics cannot be computed: too few points or zero variance.
class StatsError : public Error {
 public:
  using Error::Error;
};

}  // namespace wikirel
