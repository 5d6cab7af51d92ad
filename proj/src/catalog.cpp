#include "sheafctx/catalog.hpp"

#include <algorithm>
#include <stdexcept>

#include "json_io.hpp"

namespace sheafctx {

namespace detail {
const std::vector<std::string_view>& catalog_sources();
}

CatalogEntry parse_catalog_entry(std::string_view text) {
  const auto doc = detail::parse_document(text);
  const auto& j = doc.json;
  auto text_field = [&](const char* key) {
    const auto it = j.find(key);
    if (it == j.end() || !it->is_string()) doc.fail("/" + std::string(key), std::string("expected a string \"") + key + "\"");
    return it->get<std::string>();
  };
  auto model = detail::model_from_document(doc);
  const auto class_name = text_field("expected_class");
  const auto expected = parse_contextuality_class(class_name);
  if (!expected) doc.fail("/expected_class", "unknown class \"" + class_name + "\"");

  CatalogEntry entry{text_field("name"), std::move(model), *expected, text_field("note"), {}, {}};
  if (const auto it = j.find("sites"); it != j.end()) {
    if (!it->is_array()) doc.fail("/sites", "expected an array of label lists");
    for (const auto& site : *it) entry.sites.push_back(site.get<std::vector<std::string>>());
  }
  if (const auto it = j.find("vectors"); it != j.end()) {
    if (!it->is_object()) doc.fail("/vectors", "expected an object of vectors");
    for (const auto& [label, v] : it->items()) {
      if (!entry.model.scenario().find_measurement(label))
        doc.fail("/vectors/" + label, "unknown measurement \"" + label + "\"");
      entry.vectors[label] = v.get<std::vector<long>>();
    }
  }
  return entry;
}

const std::vector<CatalogEntry>& catalog() {
  static const auto entries = [] {
    std::vector<CatalogEntry> out;
    for (const auto source : detail::catalog_sources()) out.push_back(parse_catalog_entry(source));
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
    return out;
  }();
  return entries;
}

const CatalogEntry* find_catalog_entry(std::string_view name) {
  const auto& entries = catalog();
  const auto it = std::find_if(entries.begin(), entries.end(), [&](const auto& e) { return e.name == name; });
  return it == entries.end() ? nullptr : &*it;
}

const CatalogEntry& catalog_entry(std::string_view name) {
  if (const auto* entry = find_catalog_entry(name)) return *entry;
  throw std::out_of_range("no catalog entry named \"" + std::string(name) + "\"");
}

}  // namespace sheafctx
