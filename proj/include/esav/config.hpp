#pragma once

#include <string>
#include <utility>
#include <vector>

#include "esav/harness.hpp"

namespace esav {

/// key=value pair from the command line. Keys are `section.key` or a bare key that names exactly one
/// known setting (`epsilon` is ambiguous between [model] and [surfactant]).
using Override = std::pair<std::string, std::string>;

/// Parses "key=value"; throws ConfigError when there is no '='.
Override parse_override(const std::string& text);

/// INI text: `[section]` headers, `key = value` lines, `#` or `;` comments, optional double quotes
/// around values. An `example` key (file or override) selects the preset applied before every other
/// key; overrides apply after the file. The result is validated.
RunConfig parse_config_text(const std::string& text, const std::vector<Override>& overrides = {},
                            const std::string& source = "<config>");
RunConfig parse_config(const std::string& path, const std::vector<Override>& overrides = {});

/// Applies presets and overrides without a file.
RunConfig config_from_overrides(const std::vector<Override>& overrides);

/// Effective configuration as INI text that parse_config_text reproduces exactly.
std::string to_ini(const RunConfig& cfg);

/// Canonical `section.key` names of every setting.
const std::vector<std::string>& config_keys();

}  // namespace esav
