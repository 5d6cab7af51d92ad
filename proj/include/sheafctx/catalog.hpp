#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sheafctx/model.hpp"
#include "sheafctx/solver.hpp"

namespace sheafctx {

/// A named model shipped with the library.
struct CatalogEntry {
  std::string name;
  EmpiricalModel model;
  ContextualityClass expected_class;
  std::string note;
  /// Site lists for Bell-type entries, as measurement labels.
  std::vector<std::vector<std::string>> sites;
  /// Realizing vectors, keyed by measurement label, when the entry has them.
  std::map<std::string, std::vector<long>> vectors;
};

/// All entries in name order. Parsed once on first use.
const std::vector<CatalogEntry>& catalog();

const CatalogEntry* find_catalog_entry(std::string_view name);

/// Throws std::out_of_range for unknown names.
const CatalogEntry& catalog_entry(std::string_view name);

/// Parses one catalog document; exposed for tests of the data format.
CatalogEntry parse_catalog_entry(std::string_view text);

}  // namespace sheafctx
