/* SPDX-License-Identifier: Apache-2.0 */
#pragma once

#include <qaprlt/bnb.hpp>

#include <string>
#include <string_view>

namespace qaprlt {

inline constexpr int report_schema_version = 1;

/// Layout documented in docs/report-schema.md. Permutations are 1-based.
std::string report_to_json(const SolveReport& r);
std::string report_to_text(const SolveReport& r);

/// Inverse of report_to_json. Throws std::runtime_error on schema errors.
SolveReport report_from_json(std::string_view text);

}  // namespace qaprlt
