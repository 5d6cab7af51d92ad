#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "sheafctx/model.hpp"

namespace sheafctx {

/// Malformed or schema-violating model text. Line and column are 1-based;
/// `pointer` is the JSON pointer of the offending value, if known.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column, std::string pointer);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string pointer_;
};

/// Model file layout:
///
///   {"scenario": {"measurements": [...], "outcomes": [...], "cover": [[...], ...]},
///    "model": {"semiring": "probability" | "boolean" | "signed",
///              "rows": [{"context": [...], "weights": {"01": "1/2", ...}}, ...]}}
///
/// Weights are "p/q" strings or integers; absent assignments weigh 0.
EmpiricalModel parse_model(std::string_view text);
EmpiricalModel read_model_file(const std::filesystem::path& path);

/// Every assignment of every row, in cover order and lexicographic order.
std::string render_json(const EmpiricalModel& e);
std::string render_json(const Scenario& scenario, Semiring semiring, std::span<const Distribution> rows);
std::string render_csv(const EmpiricalModel& e);
std::string render_csv(const Scenario& scenario, std::span<const Distribution> rows);

/// One block per context size: a header of assignment strings, then one line
/// per context labelled by its measurements.
std::string render_table(const EmpiricalModel& e);
/// Rows aligned with scenario.cover(), which need not form a model.
std::string render_table(const Scenario& scenario, std::span<const Distribution> rows);

}  // namespace sheafctx
