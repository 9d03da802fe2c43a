#include "config.hpp"

#include <charconv>
#include <stdexcept>
#include <string>
#include <vector>

namespace simplab::cli {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::uint64_t to_u64(std::string_view text, std::string_view what) {
    text = trim(text);
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        throw std::invalid_argument(std::string(what) + ": '" + std::string(text) +
                                    "' is not a non-negative integer");
    }
    return v;
}

std::vector<std::uint64_t> to_triple(std::string_view text, std::string_view what) {
    std::vector<std::uint64_t> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == ',') {
            out.push_back(to_u64(text.substr(start, i - start), what));
            start = i + 1;
        }
    }
    if (out.size() != 3) throw std::invalid_argument(std::string(what) + ": expected three comma-separated values");
    return out;
}

}  // namespace

CostModel parse_weights(std::string_view text) {
    const auto v = to_triple(text, "weights");
    CostModel m{v[0], v[1], v[2]};
    m.validate();
    return m;
}

SaturationBudget parse_budget(std::string_view text) {
    const auto v = to_triple(text, "budget");
    SaturationBudget b{v[0], v[1], v[2]};
    b.validate();
    return b;
}

OutputFormat parse_format(std::string_view text) {
    text = trim(text);
    if (text == "text") return OutputFormat::Text;
    if (text == "json") return OutputFormat::Json;
    if (text == "csv") return OutputFormat::Csv;
    throw std::invalid_argument("format: expected text, json or csv, got '" + std::string(text) + "'");
}

void apply_setting(Config& config, std::string_view key, std::string_view value) {
    key = trim(key);
    value = trim(value);
    if (key == "weights") {
        config.weights = parse_weights(value);
    } else if (key == "budget") {
        config.budget = parse_budget(value);
    } else if (key == "trials") {
        const auto t = to_u64(value, "trials");
        if (t < 1 || t > 1'000'000) throw std::invalid_argument("trials: must be in [1, 1000000]");
        config.trials = static_cast<unsigned>(t);
    } else if (key == "seed") {
        config.seed = to_u64(value, "seed");
    } else if (key == "format") {
        config.format = parse_format(value);
    } else if (key == "check") {
        if (value == "true" || value == "1") {
            config.check = true;
        } else if (value == "false" || value == "0") {
            config.check = false;
        } else {
            throw std::invalid_argument("check: expected true or false");
        }
    } else {
        throw std::invalid_argument("unknown config key '" + std::string(key) + "'");
    }
}

void apply_config_file(Config& config, std::string_view text) {
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        ++line_no;
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key=value");
        }
        try {
            apply_setting(config, line.substr(0, eq), line.substr(eq + 1));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": " + e.what());
        }
    }
}

}  // namespace simplab::cli
