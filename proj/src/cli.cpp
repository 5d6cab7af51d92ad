#include "sheafctx/cli.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include <CLI11.hpp>

#include "json_io.hpp"
#include "sheafctx/bell.hpp"
#include "sheafctx/catalog.hpp"
#include "sheafctx/io.hpp"
#include "sheafctx/ksgen.hpp"
#include "sheafctx/solver.hpp"

namespace sheafctx {

namespace {

using nlohmann::ordered_json;

bool is_space(char ch) { return std::isspace(static_cast<unsigned char>(ch)) != 0; }

std::string trim(std::string_view text) {
  while (!text.empty() && is_space(text.front())) text.remove_prefix(1);
  while (!text.empty() && is_space(text.back())) text.remove_suffix(1);
  return std::string(text);
}

EmpiricalModel load_model(const std::string& source) {
  constexpr std::string_view prefix = "catalog:";
  if (source.starts_with(prefix)) return catalog_entry(source.substr(prefix.size())).model;
  return read_model_file(source);
}

void emit_model(const EmpiricalModel& e, const std::string& format, std::ostream& out) {
  if (format == "json")
    out << render_json(e);
  else if (format == "csv")
    out << render_csv(e);
  else
    out << render_table(e);
}

std::vector<std::string> labels_of(const Scenario& scenario, const Context& c) {
  std::vector<std::string> out;
  for (const auto id : c) out.push_back(scenario.measurements()[id]);
  return out;
}

std::string status_name(const ExtensionReport& report) {
  return std::visit(
      [](const auto& s) -> std::string {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, ExtensionReport::WellDefined>) return "WellDefined";
        if constexpr (std::is_same_v<S, ExtensionReport::EmptySupport>) return "EmptySupport";
        if constexpr (std::is_same_v<S, ExtensionReport::Incompatible>) return "Incompatible";
        if constexpr (std::is_same_v<S, ExtensionReport::NotExtending>) return "NotExtending";
      },
      report.status);
}

void emit_report(const EmpiricalModel& e, const ExtensionReport& report, const std::string& format,
                 std::ostream& out) {
  const auto summary = describe_status(e, report);
  if (format == "json") {
    ordered_json j;
    j["status"] = status_name(report);
    j["detail"] = summary;
    j["candidate"] = detail::model_to_json(report.target, Semiring::Boolean, report.candidate);
    out << j.dump(2) << "\n";
  } else if (format == "csv") {
    out << "# " << summary << "\n" << render_csv(report.target, report.candidate);
  } else {
    out << summary << "\n\n" << render_table(report.target, report.candidate);
  }
}

EmpiricalModel require_boolean(const EmpiricalModel& e, std::ostream& err) {
  if (e.semiring() == Semiring::Boolean) return e;
  err << "note: using the possibilistic collapse of the " << to_string(e.semiring()) << " model\n";
  return possibilistic_collapse(e);
}

ordered_json witness_json(const EmpiricalModel& e, ContextualityClass c) {
  const auto& scenario = e.scenario();
  ordered_json w;
  switch (c) {
    case ContextualityClass::StronglyContextual:
      w["kind"] = "none";
      break;
    case ContextualityClass::LogicallyContextual: {
      const auto obstruction = *is_logically_contextual(e).witness;
      const auto& ctx = scenario.cover()[obstruction.context_index];
      w["kind"] = "obstruction";
      w["context"] = labels_of(scenario, ctx);
      w["assignment"] = assignment_string(obstruction.assignment, ctx.size(), scenario);
      break;
    }
    case ContextualityClass::Contextual: {
      const auto lp = is_probabilistically_extendable(e);
      const auto& certificate = std::get<FarkasCertificate>(lp.witness);
      w["kind"] = "farkas";
      w["entries"] = ordered_json::array();
      for (const auto& entry : certificate.entries) {
        const auto& ctx = scenario.cover()[entry.context_index];
        w["entries"].push_back({{"context", labels_of(scenario, ctx)},
                                {"assignment", assignment_string(entry.assignment, ctx.size(), scenario)},
                                {"multiplier", to_string(entry.multiplier)}});
      }
      break;
    }
    case ContextualityClass::NonContextual:
      if (e.semiring() == Semiring::Probability) {
        const auto lp = is_probabilistically_extendable(e);
        const auto& d = std::get<GlobalDistribution>(lp.witness);
        w["kind"] = "distribution";
        w["weights"] = ordered_json::object();
        for (std::size_t k = 0; k < d.assignments.size(); ++k)
          w["weights"][assignment_string(d.assignments[k], scenario)] = to_string(d.weights[k]);
      } else {
        w["kind"] = "assignment";
        w["assignment"] = assignment_string(find_consistent_global(e)->values, scenario);
      }
      w["measurements"] = scenario.measurements();
      break;
  }
  return w;
}

}  // namespace

std::vector<std::string> split_labels(const Scenario& scenario, std::string_view text) {
  std::vector<std::string> out;
  const auto trimmed = trim(text);
  if (std::any_of(trimmed.begin(), trimmed.end(), is_space)) {
    std::istringstream in(trimmed);
    for (std::string label; in >> label;) {
      scenario.measurement_id(label);
      out.push_back(label);
    }
    return out;
  }
  std::string_view rest = trimmed;
  while (!rest.empty()) {
    std::size_t best = 0;
    for (const auto& label : scenario.measurements())
      if (label.size() > best && rest.starts_with(label)) best = label.size();
    if (best == 0)
      throw ScenarioError(ScenarioError::Kind::UnknownLabel,
                          "no measurement label matches the start of \"" + std::string(rest) + "\"");
    out.emplace_back(rest.substr(0, best));
    rest.remove_prefix(best);
  }
  return out;
}

Cover parse_cover_spec(const Scenario& scenario, std::string_view text) {
  auto spec = trim(text);
  if (spec.size() >= 2 && (spec[0] == 'P' || spec[0] == 'p') &&
      std::all_of(spec.begin() + 1, spec.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }))
    return power_cover(scenario.measurement_count(), std::stoul(spec.substr(1)));
  if (!spec.empty() && spec.front() == '{') spec.erase(0, 1);
  if (!spec.empty() && spec.back() == '}') spec.pop_back();
  Cover cover;
  std::istringstream in(spec);
  for (std::string member; std::getline(in, member, ',');) {
    if (trim(member).empty()) continue;
    const auto labels = split_labels(scenario, member);
    cover.push_back(scenario.context_from_labels(labels));
  }
  if (cover.empty()) throw ScenarioError(ScenarioError::Kind::EmptyCover, "empty target cover");
  return cover;
}

std::string describe_status(const EmpiricalModel& e, const ExtensionReport& report) {
  const auto& target = report.target;
  auto braces = [&](const Scenario& s, const Context& c) { return "{" + s.context_label(c) + "}"; };
  return std::visit(
      [&](const auto& s) -> std::string {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, ExtensionReport::WellDefined>) {
          return "WellDefined";
        } else if constexpr (std::is_same_v<S, ExtensionReport::EmptySupport>) {
          return "EmptySupport: S_e(" + target.context_label(s.context) +
                 ") is empty, so e is strongly non-extendable to this cover";
        } else if constexpr (std::is_same_v<S, ExtensionReport::Incompatible>) {
          const auto& v = s.violation;
          const auto t = assignment_string(v.assignment, v.overlap.size(), target);
          const auto over = braces(target, v.overlap);
          return "Incompatible: e'_" + braces(target, v.first) + "|_" + over + "(" + t + ") = " +
                 to_string(v.first_value) + " != e'_" + braces(target, v.second) + "|_" + over + "(" + t +
                 ") = " + to_string(v.second_value);
        } else {
          const auto& original = e.scenario().cover()[s.original_index];
          return "NotExtending: e_" + braces(e.scenario(), original) + "(" +
                 assignment_string(s.assignment, original.size(), e.scenario()) + ") has no preimage in e'_" +
                 braces(target, target.cover()[s.target_index]);
        }
      },
      report.status);
}

int run_command(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sheaf-theoretic contextuality toolkit", "sheafctx"};
  app.require_subcommand(1);
  std::string format = "table";
  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"table", "json", "csv"}));
  };
  std::string source;
  auto add_source = [&](CLI::App* cmd) {
    cmd->add_option("model", source, "Model file, or catalog:<name>")->required();
  };

  auto* validate = app.add_subcommand("validate", "Check a model file and summarise it");
  add_source(validate);
  add_format(validate);
  auto* classify_cmd = app.add_subcommand("classify", "Place a model in the contextuality hierarchy");
  add_source(classify_cmd);
  add_format(classify_cmd);
  auto* collapse = app.add_subcommand("collapse", "Possibilistic collapse");
  add_source(collapse);
  add_format(collapse);
  std::string target_spec;
  auto* extend = app.add_subcommand("extend", "Canonical extension to a larger cover");
  add_source(extend);
  add_format(extend);
  extend->add_option("--to", target_spec, "P<n> or a cover literal such as {ABD,BCD}")->required();
  auto* bellify_cmd = app.add_subcommand("bellify", "Canonical extension to P_nX, then the Bell construction");
  add_source(bellify_cmd);
  add_format(bellify_cmd);
  std::string keep;
  auto* submodel = app.add_subcommand("submodel", "Induced sub-model on a measurement subset");
  add_source(submodel);
  add_format(submodel);
  submodel->add_option("--keep", keep, "Measurements to keep, e.g. ABD or 'A B D'")->required();

  std::string contexts_spec;
  bool random = false;
  RandomKsParams params;
  auto* ksgen = app.add_subcommand("ks-gen", "Generate a Kochen-Specker model");
  add_format(ksgen);
  auto* contexts_opt = ksgen->add_option("--contexts", contexts_spec, "Cover, e.g. AB,BC,CA");
  auto* random_opt = ksgen->add_flag("--random", random, "Sample a random constant-size cover");
  ksgen->add_option("--x", params.measurements, "Number of measurements")->needs(random_opt);
  ksgen->add_option("--n", params.context_size, "Context size")->needs(random_opt);
  ksgen->add_option("--m", params.contexts, "Number of contexts")->needs(random_opt);
  ksgen->add_option("--seed", params.seed, "Random seed")->needs(random_opt);
  contexts_opt->excludes(random_opt);

  auto* catalog_cmd = app.add_subcommand("catalog", "Built-in models");
  catalog_cmd->require_subcommand(1);
  auto* list = catalog_cmd->add_subcommand("list", "List catalog entries");
  add_format(list);
  std::string entry_name;
  auto* show = catalog_cmd->add_subcommand("show", "Print a catalog entry");
  show->add_option("name", entry_name)->required();
  add_format(show);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const auto code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (validate->parsed()) {
      const auto e = load_model(source);
      if (format == "json") {
        ordered_json j{{"valid", true},
                       {"semiring", std::string(to_string(e.semiring()))},
                       {"measurements", e.scenario().measurement_count()},
                       {"outcomes", e.scenario().outcome_count()},
                       {"contexts", e.scenario().cover().size()}};
        out << j.dump(2) << "\n";
      } else if (format == "csv") {
        out << "valid,semiring,measurements,outcomes,contexts\ntrue," << to_string(e.semiring()) << ","
            << e.scenario().measurement_count() << "," << e.scenario().outcome_count() << ","
            << e.scenario().cover().size() << "\n";
      } else {
        out << "valid " << to_string(e.semiring()) << " model: " << e.scenario().measurement_count()
            << " measurements, " << e.scenario().outcome_count() << " outcomes, " << e.scenario().cover().size()
            << " maximal contexts\n";
      }
    } else if (classify_cmd->parsed()) {
      const auto e = load_model(source);
      const auto c = classify(e);
      if (format == "json") {
        ordered_json j{{"class", std::string(to_string(c))}, {"witness", witness_json(e, c)}};
        out << j.dump(2) << "\n";
      } else if (format == "csv") {
        out << "class\n" << to_string(c) << "\n";
      } else {
        out << to_string(c) << "\n";
      }
    } else if (collapse->parsed()) {
      emit_model(possibilistic_collapse(load_model(source)), format, out);
    } else if (extend->parsed()) {
      const auto e = require_boolean(load_model(source), err);
      const auto report = canonical_extension(e, parse_cover_spec(e.scenario(), target_spec));
      emit_report(e, report, format, out);
    } else if (bellify_cmd->parsed()) {
      const auto e = require_boolean(load_model(source), err);
      const auto result = bellify(e);
      if (const auto* bell = std::get_if<BellModel>(&result))
        emit_model(bell->model, format, out);
      else
        emit_report(e, std::get<ExtensionReport>(result), format, out);
    } else if (submodel->parsed()) {
      const auto e = load_model(source);
      const auto u = e.scenario().context_from_labels(split_labels(e.scenario(), keep));
      emit_model(induced_submodel(e, u), format, out);
    } else if (ksgen->parsed()) {
      if (!random && contexts_spec.empty()) {
        err << "ks-gen needs --contexts <spec> or --random\n" << ksgen->help();
        return 2;
      }
      const auto ks = random ? random_ks_scenario(params) : ks_scenario_from_spec(contexts_spec);
      emit_model(ks_model(ks), format, out);
    } else if (list->parsed()) {
      const auto& entries = catalog();
      if (format == "json") {
        auto j = ordered_json::array();
        for (const auto& entry : entries)
          j.push_back({{"name", entry.name},
                       {"expected_class", std::string(to_string(entry.expected_class))},
                       {"note", entry.note}});
        out << j.dump(2) << "\n";
      } else if (format == "csv") {
        out << "name,expected_class\n";
        for (const auto& entry : entries) out << entry.name << "," << to_string(entry.expected_class) << "\n";
      } else {
        std::size_t width = 0;
        for (const auto& entry : entries) width = std::max(width, entry.name.size());
        for (const auto& entry : entries)
          out << entry.name << std::string(width - entry.name.size() + 2, ' ') << to_string(entry.expected_class)
              << "\n";
      }
    } else if (show->parsed()) {
      emit_model(catalog_entry(entry_name).model, format, out);
    }
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::logic_error& e) {
    err << "internal error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace sheafctx
