#pragma once

#include <map>
#include <string>
#include <string_view>

#include <json.hpp>

#include "sheafctx/io.hpp"
#include "sheafctx/model.hpp"

namespace sheafctx::detail {

/// Parsed JSON plus the byte offset at which each value was read, keyed by
/// JSON pointer.
struct Document {
  std::string text;
  nlohmann::json json;
  std::map<std::string, std::size_t> offsets;

  [[noreturn]] void fail(const std::string& pointer, const std::string& message) const;
};

Document parse_document(std::string_view text);

/// Reads the scenario and model blocks of `doc.json` (or of the object at
/// `base`, a JSON pointer).
EmpiricalModel model_from_document(const Document& doc, const std::string& base = "");

nlohmann::ordered_json model_to_json(const EmpiricalModel& e);
nlohmann::ordered_json model_to_json(const Scenario& scenario, Semiring semiring, std::span<const Distribution> rows);

}  // namespace sheafctx::detail
