#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "simplab/expr.hpp"
#include "simplab/rewrite.hpp"

namespace simplab::cli {

enum class OutputFormat { Text, Json, Csv };

struct Config {
    CostModel weights;
    SaturationBudget budget;
    unsigned trials = 16;
    std::uint64_t seed = 1;
    OutputFormat format = OutputFormat::Text;
    bool check = false;
};

/// Setting values as written on the command line or in a config file. Each
/// parser throws std::invalid_argument with a message naming the key.
CostModel parse_weights(std::string_view text);
SaturationBudget parse_budget(std::string_view text);
OutputFormat parse_format(std::string_view text);

/// Applies one `key = value` setting.
void apply_setting(Config& config, std::string_view key, std::string_view value);

/// Flat `key=value` file, `#` comments. Keys: weights, budget, trials, seed,
/// format, check.
void apply_config_file(Config& config, std::string_view text);

}  // namespace simplab::cli
