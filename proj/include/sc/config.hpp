#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "sc/core.hpp"

namespace sc {

/// Key/value overrides applied after file parsing; last write wins.
/// Keys are the documented config keys (e.g. "gamma", "seed").
using Overrides = std::map<std::string, std::string>;

/// Parses the plain-text run configuration. One `key = value` pair per line,
/// `#` starts a comment. Keys: gamma, signs, x0, t_end, dt_max, step_factor,
/// eps_coll, seed, record_stride (grammar documented in the README).
/// Unknown keys and malformed values are reported together.
SimParams parse_config_text(std::string_view text, const Overrides& overrides = {});

SimParams parse_config_file(const std::filesystem::path& path, const Overrides& overrides = {});

/// Inverse of parsing: emits all nine keys with round-trip precision, so
/// parse(serialize(p)) == p field-for-field.
std::string serialize_config(const SimParams& params);

/// Splits "key=value" (used for CLI --set); throws on missing '='.
std::pair<std::string, std::string> split_override(std::string_view kv);

}  // namespace sc
