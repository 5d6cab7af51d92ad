#pragma once

#include <string>
#include <vector>

#include "sheafctx/model.hpp"

namespace fixtures {

using namespace sheafctx;

// A model written as a table: one row of weights per cover member, columns
// in lexicographic assignment order.
inline EmpiricalModel table(std::vector<std::string> measurements, std::vector<std::vector<std::string>> cover,
                            Semiring semiring, std::vector<std::vector<std::string>> weights,
                            std::vector<std::string> outcomes = {"0", "1"}) {
  auto scenario = validate_scenario({measurements, outcomes, cover});
  std::vector<Distribution> rows;
  for (std::size_t i = 0; i < cover.size(); ++i) {
    const auto c = scenario.context_from_labels(cover[i]);
    std::map<AssignmentIndex, Rational> w;
    for (std::size_t k = 0; k < weights[i].size(); ++k) w[k] = parse_rational(weights[i][k]);
    rows.emplace_back(semiring, c, outcomes.size(), std::move(w));
  }
  return build_model(std::move(scenario), semiring, std::move(rows));
}

inline std::vector<std::string> bits(const std::string& text) {
  std::vector<std::string> out;
  for (const char ch : text) out.emplace_back(1, ch);
  return out;
}

inline EmpiricalModel triangle() {
  return table({"A", "B", "C"}, {{"A", "B"}, {"B", "C"}, {"C", "A"}}, Semiring::Boolean,
               {bits("0110"), bits("0110"), bits("0110")});
}

inline EmpiricalModel chsh() {
  return table({"A", "A'", "B", "B'"}, {{"A", "B"}, {"A", "B'"}, {"A'", "B"}, {"A'", "B'"}}, Semiring::Probability,
               {{"1/2", "0", "0", "1/2"},
                {"3/8", "1/8", "1/8", "3/8"},
                {"3/8", "1/8", "1/8", "3/8"},
                {"1/8", "3/8", "3/8", "1/8"}});
}

inline EmpiricalModel ex_sig() {
  return table({"A", "B", "C", "D"}, {{"A", "B"}, {"B", "C"}, {"C", "D"}, {"D", "A"}}, Semiring::Boolean,
               {bits("1111"), bits("1001"), bits("1001"), bits("1111")});
}

inline Context ctx(const Scenario& s, std::vector<std::string> labels) { return s.context_from_labels(labels); }

inline std::string row_string(const EmpiricalModel& e, const Context& c) {
  const auto& d = e.row(c);
  std::string out;
  for (AssignmentIndex s = 0; s < assignment_count(c.size(), e.scenario().outcome_count()); ++s) {
    if (!out.empty()) out += ",";
    out += to_string(d.weight(s));
  }
  return out;
}

}  // namespace fixtures
