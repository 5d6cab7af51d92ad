#pragma once

#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sheafctx/extension.hpp"
#include "sheafctx/scenario.hpp"

namespace sheafctx {

/// Runs one command line (without the program name). Returns 0 on success,
/// 2 on usage or input errors. Analysis outcomes are never errors.
int run_command(std::span<const std::string> args, std::ostream& out, std::ostream& err);

/// Splits "ABD" or "A B D" into measurement labels. Without whitespace the
/// text is consumed greedily by the longest matching label.
std::vector<std::string> split_labels(const Scenario& scenario, std::string_view text);

/// "P3" or a cover literal such as "{ABD,BCD}".
Cover parse_cover_spec(const Scenario& scenario, std::string_view text);

/// One line summary, e.g.
/// "Incompatible: e'_{A B D}|_{B D}(01) = 1 != e'_{B C D}|_{B D}(01) = 0".
std::string describe_status(const EmpiricalModel& e, const ExtensionReport& report);

}  // namespace sheafctx
