#include "sheafctx/io.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <sstream>

#include "json_io.hpp"

namespace sheafctx {

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column, std::string pointer)
    : std::runtime_error(message), line_(line), column_(column), pointer_(std::move(pointer)) {}

namespace detail {

namespace {

using nlohmann::json;

// Lets the SAX callbacks know how far the lexer has read.
struct CountingIterator {
  using iterator_category = std::forward_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  const char* at = nullptr;
  const char* base = nullptr;
  std::size_t* consumed = nullptr;

  reference operator*() const { return *at; }
  CountingIterator& operator++() {
    ++at;
    *consumed = static_cast<std::size_t>(at - base);
    return *this;
  }
  CountingIterator operator++(int) {
    auto old = *this;
    ++*this;
    return old;
  }
  friend bool operator==(const CountingIterator& a, const CountingIterator& b) { return a.at == b.at; }
};

std::string escape_token(std::string_view token) {
  std::string out;
  for (const char ch : token) {
    if (ch == '~')
      out += "~0";
    else if (ch == '/')
      out += "~1";
    else
      out += ch;
  }
  return out;
}

class PositionRecorder : public nlohmann::json_sax<json> {
 public:
  PositionRecorder(const std::size_t& consumed, std::map<std::string, std::size_t>& offsets)
      : consumed_(consumed), offsets_(offsets) {}

  bool null() override { return value(); }
  bool boolean(bool) override { return value(); }
  bool number_integer(number_integer_t) override { return value(); }
  bool number_unsigned(number_unsigned_t) override { return value(); }
  bool number_float(number_float_t, const string_t&) override { return value(); }
  bool string(string_t&) override { return value(); }
  bool binary(binary_t&) override { return value(); }
  bool start_object(std::size_t) override { return open(false); }
  bool key(string_t& k) override {
    frames_.back().key = k;
    return true;
  }
  bool end_object() override { return close(); }
  bool start_array(std::size_t) override { return open(true); }
  bool end_array() override { return close(); }
  bool parse_error(std::size_t position, const std::string&, const nlohmann::detail::exception& ex) override {
    error_position = position;
    error_message = ex.what();
    return false;
  }

  std::optional<std::size_t> error_position;
  std::string error_message;

 private:
  struct Frame {
    bool array = false;
    std::size_t index = 0;
    std::string key;
  };

  std::string next_pointer() const {
    std::string out;
    for (const auto& f : frames_) out += "/" + (f.array ? std::to_string(f.index) : escape_token(f.key));
    return out;
  }
  bool value() {
    offsets_.emplace(next_pointer(), consumed_);
    advance();
    return true;
  }
  bool open(bool array) {
    offsets_.emplace(next_pointer(), consumed_);
    frames_.push_back({array, 0, {}});
    return true;
  }
  bool close() {
    frames_.pop_back();
    advance();
    return true;
  }
  void advance() {
    if (!frames_.empty() && frames_.back().array) ++frames_.back().index;
  }

  const std::size_t& consumed_;
  std::map<std::string, std::size_t>& offsets_;
  std::vector<Frame> frames_;
};

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < offset; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

std::string strip_exception_prefix(std::string message) {
  if (!message.empty() && message.front() == '[') {
    const auto close = message.find("] ");
    if (close != std::string::npos) message.erase(0, close + 2);
  }
  if (message.starts_with("parse error at line ")) {
    const auto colon = message.find(": ");
    if (colon != std::string::npos) message = "parse error: " + message.substr(colon + 2);
  }
  return message;
}

const json& member(const Document& doc, const json& object, const std::string& pointer, const char* key) {
  if (!object.is_object()) doc.fail(pointer, "expected an object");
  const auto it = object.find(key);
  if (it == object.end()) doc.fail(pointer, std::string("missing key \"") + key + "\"");
  return *it;
}

std::vector<std::string> string_list(const Document& doc, const json& value, const std::string& pointer) {
  if (!value.is_array()) doc.fail(pointer, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (!value[i].is_string()) doc.fail(pointer + "/" + std::to_string(i), "expected a string");
    out.push_back(value[i].get<std::string>());
  }
  return out;
}

Rational weight_value(const Document& doc, const json& value, const std::string& pointer) {
  if (value.is_number_unsigned()) return Rational(value.get<std::uint64_t>());
  if (value.is_number_integer()) return Rational(value.get<std::int64_t>());
  if (!value.is_string()) doc.fail(pointer, "expected a rational string such as \"3/8\" or an integer");
  try {
    return parse_rational(value.get<std::string>());
  } catch (const std::invalid_argument&) {
    doc.fail(pointer, "\"" + value.get<std::string>() + "\" is not a rational");
  }
}

}  // namespace

void Document::fail(const std::string& pointer, const std::string& message) const {
  // fall back to the closest ancestor that was recorded
  std::string probe = pointer;
  auto it = offsets.find(probe);
  while (it == offsets.end() && !probe.empty()) {
    probe.erase(probe.rfind('/'));
    it = offsets.find(probe);
  }
  const auto offset = it == offsets.end() ? 0 : (it->second == 0 ? 0 : it->second - 1);
  const auto [line, column] = line_column(text, offset);
  throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(column) + " (" +
                       (pointer.empty() ? std::string("/") : pointer) + "): " + message,
                   line, column, pointer);
}

Document parse_document(std::string_view text) {
  Document doc;
  doc.text = std::string(text);
  std::size_t consumed = 0;
  PositionRecorder recorder(consumed, doc.offsets);
  const char* begin = doc.text.data();
  const CountingIterator first{begin, begin, &consumed};
  const CountingIterator last{begin + doc.text.size(), begin, &consumed};
  if (!json::sax_parse(first, last, &recorder)) {
    const auto offset = recorder.error_position.value_or(1);
    const auto [line, column] = line_column(doc.text, offset == 0 ? 0 : offset - 1);
    throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                         strip_exception_prefix(recorder.error_message),
                     line, column, "");
  }
  doc.json = json::parse(doc.text);
  return doc;
}

EmpiricalModel model_from_document(const Document& doc, const std::string& base) {
  const auto& root = base.empty() ? doc.json : doc.json.at(json::json_pointer(base));
  const auto scenario_ptr = base + "/scenario";
  const auto& scenario_json = member(doc, root, base, "scenario");

  RawScenario raw;
  raw.measurements = string_list(doc, member(doc, scenario_json, scenario_ptr, "measurements"),
                                 scenario_ptr + "/measurements");
  raw.outcomes = string_list(doc, member(doc, scenario_json, scenario_ptr, "outcomes"), scenario_ptr + "/outcomes");
  const auto& cover_json = member(doc, scenario_json, scenario_ptr, "cover");
  const auto cover_ptr = scenario_ptr + "/cover";
  if (!cover_json.is_array()) doc.fail(cover_ptr, "expected an array of contexts");
  auto known = [&](const std::string& label) {
    return std::find(raw.measurements.begin(), raw.measurements.end(), label) != raw.measurements.end();
  };
  for (std::size_t i = 0; i < cover_json.size(); ++i) {
    const auto ptr = cover_ptr + "/" + std::to_string(i);
    auto labels = string_list(doc, cover_json[i], ptr);
    for (std::size_t k = 0; k < labels.size(); ++k)
      if (!known(labels[k])) doc.fail(ptr + "/" + std::to_string(k), "unknown measurement \"" + labels[k] + "\"");
    raw.cover.push_back(std::move(labels));
  }
  auto scenario = validate_scenario(raw);

  const auto model_ptr = base + "/model";
  const auto& model_json = member(doc, root, base, "model");
  const auto& semiring_json = member(doc, model_json, model_ptr, "semiring");
  if (!semiring_json.is_string()) doc.fail(model_ptr + "/semiring", "expected a string");
  const auto semiring = parse_semiring(semiring_json.get<std::string>());
  if (!semiring)
    doc.fail(model_ptr + "/semiring", "unknown semiring \"" + semiring_json.get<std::string>() +
                                          "\" (expected probability, boolean or signed)");

  const auto& rows_json = member(doc, model_json, model_ptr, "rows");
  const auto rows_ptr = model_ptr + "/rows";
  if (!rows_json.is_array()) doc.fail(rows_ptr, "expected an array of rows");
  const auto q = scenario.outcome_count();
  std::vector<Distribution> rows;
  for (std::size_t r = 0; r < rows_json.size(); ++r) {
    const auto row_ptr = rows_ptr + "/" + std::to_string(r);
    const auto labels = string_list(doc, member(doc, rows_json[r], row_ptr, "context"), row_ptr + "/context");
    for (std::size_t k = 0; k < labels.size(); ++k)
      if (!known(labels[k]))
        doc.fail(row_ptr + "/context/" + std::to_string(k), "unknown measurement \"" + labels[k] + "\"");
    const auto context = scenario.context_from_labels(labels);
    if (context.size() != labels.size()) doc.fail(row_ptr + "/context", "repeated measurement in context");

    const auto& weights_json = member(doc, rows_json[r], row_ptr, "weights");
    const auto weights_ptr = row_ptr + "/weights";
    if (!weights_json.is_object()) doc.fail(weights_ptr, "expected an object of assignment weights");
    std::map<AssignmentIndex, Rational> weights;
    for (const auto& [key, value] : weights_json.items()) {
      const auto ptr = weights_ptr + "/" + escape_token(key);
      if (key.size() != context.size())
        doc.fail(ptr, "assignment \"" + key + "\" has length " + std::to_string(key.size()) + ", expected " +
                          std::to_string(context.size()));
      // labels are listed in any order; values follow context order
      std::vector<OutcomeId> values(context.size());
      for (std::size_t k = 0; k < key.size(); ++k) {
        const auto outcome = scenario.find_outcome(key[k]);
        if (!outcome) doc.fail(ptr, std::string("unknown outcome '") + key[k] + "'");
        values[*context.position(scenario.measurement_id(labels[k]))] = *outcome;
      }
      weights[encode_assignment(values, q)] = weight_value(doc, value, ptr);
    }
    try {
      rows.emplace_back(*semiring, context, q, std::move(weights));
    } catch (const ModelError& error) {
      const auto [line, column] = line_column(doc.text, doc.offsets.count(row_ptr) ? doc.offsets.at(row_ptr) : 0);
      throw ModelError(error.kind(), "line " + std::to_string(line) + ", column " + std::to_string(column) + " (" +
                                         row_ptr + "): " + error.what());
    }
  }
  return build_model(std::move(scenario), *semiring, std::move(rows));
}

nlohmann::ordered_json model_to_json(const EmpiricalModel& e) {
  return model_to_json(e.scenario(), e.semiring(), e.rows());
}

nlohmann::ordered_json model_to_json(const Scenario& scenario, Semiring semiring,
                                     std::span<const Distribution> model_rows) {
  const auto q = scenario.outcome_count();
  nlohmann::ordered_json cover = nlohmann::ordered_json::array();
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  auto labels = [&](const Context& c) {
    std::vector<std::string> out;
    for (const auto id : c) out.push_back(scenario.measurements()[id]);
    return out;
  };
  for (std::size_t i = 0; i < scenario.cover().size(); ++i) {
    const auto& c = scenario.cover()[i];
    cover.push_back(labels(c));
    nlohmann::ordered_json weights = nlohmann::ordered_json::object();
    for (AssignmentIndex s = 0; s < assignment_count(c.size(), q); ++s)
      weights[assignment_string(s, c.size(), scenario)] = to_string(model_rows[i].weight(s));
    rows.push_back({{"context", labels(c)}, {"weights", std::move(weights)}});
  }
  nlohmann::ordered_json out;
  out["scenario"] = {{"measurements", scenario.measurements()}, {"outcomes", scenario.outcomes()}, {"cover", cover}};
  out["model"] = {{"semiring", std::string(to_string(semiring))}, {"rows", std::move(rows)}};
  return out;
}

}  // namespace detail

EmpiricalModel parse_model(std::string_view text) {
  return detail::model_from_document(detail::parse_document(text));
}

EmpiricalModel read_model_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string(), 0, 0, "");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_model(buffer.str());
}

std::string render_json(const EmpiricalModel& e) { return detail::model_to_json(e).dump(2) + "\n"; }

std::string render_json(const Scenario& scenario, Semiring semiring, std::span<const Distribution> rows) {
  return detail::model_to_json(scenario, semiring, rows).dump(2) + "\n";
}

std::string render_csv(const EmpiricalModel& e) { return render_csv(e.scenario(), e.rows()); }

std::string render_csv(const Scenario& scenario, std::span<const Distribution> rows) {
  const auto q = scenario.outcome_count();
  auto field = [](const std::string& text) {
    if (text.find_first_of(",\"\n") == std::string::npos) return text;
    std::string out = "\"";
    for (const char ch : text) {
      if (ch == '"') out += '"';
      out += ch;
    }
    return out + "\"";
  };
  std::string out = "context,assignment,value\n";
  for (std::size_t i = 0; i < scenario.cover().size(); ++i) {
    const auto& c = scenario.cover()[i];
    const auto label = field(scenario.context_label(c));
    for (AssignmentIndex s = 0; s < assignment_count(c.size(), q); ++s)
      out += label + "," + field(assignment_string(s, c.size(), scenario)) + "," + to_string(rows[i].weight(s)) + "\n";
  }
  return out;
}

namespace {

std::string rstrip(std::string line) {
  line.erase(line.find_last_not_of(' ') + 1);
  return line;
}

std::string pad(std::string text, std::size_t width) {
  if (text.size() < width) text.append(width - text.size(), ' ');
  return text;
}

}  // namespace

std::string render_table(const EmpiricalModel& e) { return render_table(e.scenario(), e.rows()); }

std::string render_table(const Scenario& scenario, std::span<const Distribution> rows) {
  const auto q = scenario.outcome_count();
  std::vector<std::size_t> sizes;
  for (const auto& c : scenario.cover()) sizes.push_back(c.size());
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());

  std::string out;
  for (const auto size : sizes) {
    if (!out.empty()) out += "\n";
    const auto count = assignment_count(size, q);
    std::vector<std::string> header;
    for (AssignmentIndex s = 0; s < count; ++s) header.push_back(assignment_string(s, size, scenario));

    std::vector<std::pair<std::string, std::vector<std::string>>> lines;
    std::size_t label_width = 0;
    std::size_t cell_width = 0;
    for (const auto& h : header) cell_width = std::max(cell_width, h.size());
    for (std::size_t i = 0; i < scenario.cover().size(); ++i) {
      const auto& c = scenario.cover()[i];
      if (c.size() != size) continue;
      std::vector<std::string> cells;
      for (AssignmentIndex s = 0; s < count; ++s) {
        cells.push_back(to_string(rows[i].weight(s)));
        cell_width = std::max(cell_width, cells.back().size());
      }
      auto label = scenario.context_label(c);
      label_width = std::max(label_width, label.size());
      lines.emplace_back(std::move(label), std::move(cells));
    }

    std::string head = std::string(label_width, ' ');
    for (const auto& h : header) head += "  " + pad(h, cell_width);
    out += rstrip(head) + "\n";
    for (const auto& [label, cells] : lines) {
      std::string line = pad(label, label_width);
      for (const auto& cell : cells) line += "  " + pad(cell, cell_width);
      out += rstrip(line) + "\n";
    }
  }
  return out;
}

}  // namespace sheafctx
