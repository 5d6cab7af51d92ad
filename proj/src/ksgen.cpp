#include "sheafctx/ksgen.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <utility>

namespace sheafctx {

KsScenario::KsScenario(Scenario scenario) : scenario_(std::move(scenario)), context_size_(0) {
  if (scenario_.outcomes() != std::vector<std::string>{"0", "1"})
    throw KsError(KsError::Kind::NonBinaryOutcome, "Kochen-Specker scenarios need outcomes exactly {0, 1}");
  context_size_ = scenario_.cover().front().size();
  for (const auto& c : scenario_.cover()) {
    if (c.size() != context_size_)
      throw KsError(KsError::Kind::VariableContextSize, "context " + scenario_.context_label(c, "") + " has size " +
                                                            std::to_string(c.size()) + ", expected " +
                                                            std::to_string(context_size_));
  }
}

std::size_t outcome_count(std::span<const OutcomeId> values) {
  std::size_t ones = 0;
  for (const auto v : values) {
    if (v > 1) throw KsError(KsError::Kind::NonBinaryOutcome, "outcome outside {0, 1}");
    ones += v;
  }
  return ones;
}

std::size_t outcome_count(const Assignment& s) { return outcome_count(s.values); }

namespace {

Distribution boolean_row(const Context& c, std::vector<AssignmentIndex> support) {
  std::map<AssignmentIndex, Rational> weights;
  for (const auto s : support) weights.emplace(s, 1);
  return Distribution(Semiring::Boolean, c, 2, std::move(weights));
}

std::vector<AssignmentIndex> ks_support(std::size_t size) {
  // exactly one 1: indices 2^(size-1), ..., 2, 1 in ascending order
  std::vector<AssignmentIndex> out;
  for (std::size_t k = size; k-- > 0;) out.push_back(AssignmentIndex{1} << k);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

EmpiricalModel ks_model(const KsScenario& ks) {
  std::vector<Distribution> rows;
  for (const auto& c : ks.scenario().cover()) rows.push_back(boolean_row(c, ks_support(c.size())));
  return build_model(ks.scenario(), Semiring::Boolean, std::move(rows));
}

EmpiricalModel ks_canonical_extension(const KsScenario& ks) {
  const auto& base = ks.scenario();
  const auto n = ks.context_size();
  auto scenario = base.with_cover(power_cover(base.measurement_count(), n));
  std::vector<Distribution> rows;
  for (const auto& c : scenario.cover()) {
    if (base.cover_index(c)) {
      rows.push_back(boolean_row(c, ks_support(n)));
      continue;
    }
    // o is monotone, so the maximal W = C n D are the only constraints
    std::vector<std::vector<std::size_t>> positions;
    for (const auto& d : base.cover()) {
      std::vector<std::size_t> pos;
      for (std::size_t k = 0; k < c.size(); ++k)
        if (d.contains(c[k])) pos.push_back(k);
      if (pos.size() > 1) positions.push_back(std::move(pos));
    }
    std::vector<AssignmentIndex> support;
    for (AssignmentIndex s = 0; s < assignment_count(n, 2); ++s) {
      const auto values = decode_assignment(s, n, 2);
      const bool possible = std::all_of(positions.begin(), positions.end(), [&](const auto& pos) {
        std::size_t ones = 0;
        for (const auto k : pos) ones += values[k];
        return ones <= 1;
      });
      if (possible) support.push_back(s);
    }
    rows.push_back(boolean_row(c, std::move(support)));
  }
  return build_model(std::move(scenario), Semiring::Boolean, std::move(rows));
}

std::optional<std::vector<MeasurementId>> find_automorphism(std::size_t vertex_count, const Cover& edges,
                                                            MeasurementId from, MeasurementId to) {
  if (from >= vertex_count || to >= vertex_count) throw std::out_of_range("vertex outside the hypergraph");
  const std::set<Context> edge_set(edges.begin(), edges.end());
  const auto partial = down_closure(edges);
  std::vector<std::vector<std::size_t>> incident(vertex_count);
  for (std::size_t e = 0; e < edges.size(); ++e)
    for (const auto v : edges[e]) incident[v].push_back(e);

  // multiset of incident edge sizes, a cheap invariant
  std::vector<std::vector<std::size_t>> signature(vertex_count);
  for (std::size_t v = 0; v < vertex_count; ++v) {
    for (const auto e : incident[v]) signature[v].push_back(edges[e].size());
    std::sort(signature[v].begin(), signature[v].end());
  }
  if (signature[from] != signature[to]) return std::nullopt;

  std::vector<MeasurementId> order{from};
  for (MeasurementId v = 0; v < vertex_count; ++v)
    if (v != from) order.push_back(v);

  constexpr auto unset = static_cast<MeasurementId>(-1);
  std::vector<MeasurementId> image(vertex_count, unset);
  std::vector<bool> used(vertex_count, false);

  auto image_ok = [&](MeasurementId v) {
    for (const auto e : incident[v]) {
      std::vector<MeasurementId> mapped;
      bool complete = true;
      for (const auto u : edges[e]) {
        if (image[u] == unset)
          complete = false;
        else
          mapped.push_back(image[u]);
      }
      const Context c(std::move(mapped));
      if (complete ? !edge_set.contains(c) : !partial.contains(c)) return false;
    }
    return true;
  };

  auto search = [&](auto&& self, std::size_t depth) -> bool {
    if (depth == order.size()) return true;
    const auto v = order[depth];
    for (MeasurementId w = 0; w < vertex_count; ++w) {
      if (depth == 0 && w != to) continue;
      if (used[w] || signature[v] != signature[w]) continue;
      image[v] = w;
      used[w] = true;
      if (image_ok(v) && self(self, depth + 1)) return true;
      used[w] = false;
      image[v] = unset;
    }
    return false;
  };
  if (!search(search, 0)) return std::nullopt;
  return image;
}

bool is_vertex_transitive(std::size_t vertex_count, const Cover& edges) {
  for (MeasurementId v = 1; v < vertex_count; ++v)
    if (!find_automorphism(vertex_count, edges, 0, v)) return false;
  return true;
}

bool is_symmetric_ks(const KsScenario& ks) {
  return is_vertex_transitive(ks.scenario().measurement_count(), ks.scenario().cover());
}

KsScenario random_ks_scenario(const RandomKsParams& p) {
  const auto x = p.measurements;
  const auto n = p.context_size;
  if (x == 0 || n == 0 || n > x || p.contexts == 0)
    throw KsError(KsError::Kind::BadParameters, "need 1 <= n <= |X| and at least one context");
  if (p.contexts * n < x)
    throw KsError(KsError::Kind::BadParameters, "too few contexts to cover every measurement");
  // C(x, n) without overflow for the sizes that matter
  double subsets = 1;
  for (std::size_t k = 0; k < n; ++k) subsets = subsets * static_cast<double>(x - k) / static_cast<double>(k + 1);
  if (static_cast<double>(p.contexts) > subsets + 0.5)
    throw KsError(KsError::Kind::BadParameters, "more contexts requested than there are n-subsets");

  std::mt19937_64 rng(p.seed);
  std::vector<MeasurementId> ids(x);
  std::iota(ids.begin(), ids.end(), 0);
  for (std::size_t attempt = 0; attempt < p.max_attempts; ++attempt) {
    Cover cover;
    std::set<Context> seen;
    std::size_t draws = 0;
    while (cover.size() < p.contexts && draws++ < 100 * p.contexts) {
      std::shuffle(ids.begin(), ids.end(), rng);
      Context c(std::vector<MeasurementId>(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n)));
      if (seen.insert(c).second) cover.push_back(std::move(c));
    }
    if (cover.size() < p.contexts) continue;
    std::vector<bool> covered(x, false);
    for (const auto& c : cover)
      for (const auto v : c) covered[v] = true;
    if (std::find(covered.begin(), covered.end(), false) != covered.end()) continue;

    std::vector<std::string> labels;
    for (std::size_t k = 1; k <= x; ++k) labels.push_back("x" + std::to_string(k));
    return KsScenario(make_scenario(std::move(labels), {"0", "1"}, std::move(cover)));
  }
  throw KsError(KsError::Kind::BadParameters, "no covering sample found within the attempt limit");
}

KsScenario ks_scenario_from_spec(std::string_view spec) {
  RawScenario raw;
  raw.outcomes = {"0", "1"};
  std::string current;
  auto flush = [&] {
    std::vector<std::string> context;
    const auto first = current.find_first_not_of(" \t");
    current = first == std::string::npos ? "" : current.substr(first, current.find_last_not_of(" \t") - first + 1);
    const bool spaced = current.find_first_of(" \t") != std::string::npos;
    std::string token;
    for (const char ch : current) {
      if (ch == ' ' || ch == '\t') {
        if (!token.empty()) context.push_back(std::exchange(token, {}));
      } else if (spaced) {
        token += ch;
      } else {
        context.emplace_back(1, ch);
      }
    }
    if (!token.empty()) context.push_back(token);
    current.clear();
    if (context.empty()) return;
    for (const auto& label : context)
      if (std::find(raw.measurements.begin(), raw.measurements.end(), label) == raw.measurements.end())
        raw.measurements.push_back(label);
    raw.cover.push_back(std::move(context));
  };
  for (const char ch : spec) {
    if (ch == ',' || ch == ';')
      flush();
    else if (ch != '{' && ch != '}')
      current += ch;
  }
  flush();
  if (raw.cover.empty()) throw ScenarioError(ScenarioError::Kind::EmptyCover, "empty context specification");
  return KsScenario(validate_scenario(raw));
}

}  // namespace sheafctx
