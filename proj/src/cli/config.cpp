#include "smc/cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "smc/error.hpp"

namespace smc::cli {

namespace {

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::string unquote(std::string s)
{
    if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front())
        return s.substr(1, s.size() - 2);
    return s;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& text, const char* expected)
{
    fail(Errc::ConfigError, fmt::format("{}: '{}' is not {}", key, text, expected));
}

double parse_double(const std::string& key, const std::string& text)
{
    double v = 0.0;
    const auto t = trim(text);
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) bad_value(key, text, "a number");
    return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& text)
{
    std::uint64_t v = 0;
    const auto t = trim(text);
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) bad_value(key, text, "a nonnegative integer");
    return v;
}

std::string fmt_double(double v) { return fmt::format("{:.17g}", v); }

bool is_key(std::string_view k)
{
    if (k.empty()) return false;
    for (char c : k)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) return false;
    return true;
}

// Drops a trailing comment and tracks bracket depth outside quotes. Returns
// false on an unterminated string.
bool scan_value(std::string_view v, int& depth, std::string& kept)
{
    char quote = 0;
    for (char c : v) {
        if (quote) {
            if (c == quote) quote = 0;
        } else if (c == '"' || c == '\'') {
            quote = c;
        } else if (c == '#') {
            break;
        } else if (c == '[') {
            ++depth;
        } else if (c == ']') {
            --depth;
        }
        kept += c;
    }
    return quote == 0 && depth >= 0;
}

// CLI11 turns stray lines into flags and reads arrays from one line only, so
// the structure is checked here and multi-line arrays are joined.
std::string checked_text(std::istream& in)
{
    std::string text, line, pending;
    int depth = 0;
    for (std::size_t no = 1; std::getline(in, line); ++no) {
        const auto t = trim(line);
        const auto bad = [&] { fail(Errc::ConfigError, fmt::format("malformed TOML at line {}: '{}'", no, t)); };
        if (depth > 0) {
            pending += ' ';
            if (!scan_value(t, depth, pending)) bad();
            if (depth == 0) text += pending + '\n';
            continue;
        }
        if (t.empty() || t[0] == '#') continue;
        if (t[0] == '[') {
            const auto close = t.find(']');
            if (close == std::string::npos || !is_key(trim(std::string_view(t).substr(1, close - 1)))) bad();
            const auto rest = trim(std::string_view(t).substr(close + 1));
            if (!rest.empty() && rest[0] != '#') bad();
            text += t.substr(0, close + 1) + '\n';
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos || !is_key(trim(std::string_view(t).substr(0, eq)))) bad();
        const auto value = trim(std::string_view(t).substr(eq + 1));
        pending = t.substr(0, eq + 1) + ' ';
        if (value.empty() || !scan_value(value, depth, pending)) bad();
        if (depth == 0) text += pending + '\n';
    }
    if (depth != 0) fail(Errc::ConfigError, "malformed TOML: unterminated array");
    return text;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view data) noexcept
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::vector<std::string> split_list(std::string_view text)
{
    std::string t = trim(text);
    if (t.size() >= 2 && t.front() == '[' && t.back() == ']') t = t.substr(1, t.size() - 2);
    std::vector<std::string> out;
    if (trim(t).empty()) return out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = t.find(',', start);
        out.push_back(unquote(trim(std::string_view(t).substr(start, comma - start))));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    // TOML allows a trailing comma.
    if (out.size() > 1 && out.back().empty()) out.pop_back();
    return out;
}

Config Config::parse_toml(std::istream& in)
{
    Config cfg;
    std::vector<CLI::ConfigItem> items;
    std::istringstream checked(checked_text(in));
    try {
        items = CLI::ConfigTOML().from_config(checked);
    } catch (const CLI::Error& e) {
        fail(Errc::ConfigError, fmt::format("malformed TOML: {}", e.what()));
    }
    for (const auto& item : items) {
        if (item.name == "++" || item.name == "--") continue;
        std::string joined;
        for (std::size_t i = 0; i < item.inputs.size(); ++i) {
            if (i > 0) joined += ", ";
            joined += unquote(item.inputs[i]);
        }
        cfg.values_[item.fullname()] = joined;
    }
    return cfg;
}

Config Config::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) fail(Errc::ConfigError, fmt::format("cannot open config file {}", path.string()));
    return parse_toml(in);
}

void Config::set(std::string_view assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || trim(assignment.substr(0, eq)).empty())
        fail(Errc::ConfigError, fmt::format("override '{}' is not key=value", assignment));
    set(trim(assignment.substr(0, eq)), unquote(trim(assignment.substr(eq + 1))));
}

void Config::set(const std::string& key, const std::string& value) { values_[key] = value; }

bool Config::has(const std::string& key) const { return values_.count(key) > 0; }

const std::string* Config::raw(const std::string& key) const
{
    const auto it = values_.find(key);
    return it == values_.end() ? nullptr : &it->second;
}

void Config::record(const std::string& key, std::string value) const { resolved_[key] = std::move(value); }

std::optional<std::string> Config::find(const std::string& key) const
{
    const auto* v = raw(key);
    if (!v) return std::nullopt;
    record(key, *v);
    return *v;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const
{
    const auto* v = raw(key);
    std::string out = v ? *v : fallback;
    record(key, out);
    return out;
}

std::string Config::get_choice(const std::string& key, const std::string& fallback,
                               const std::vector<std::string>& allowed) const
{
    std::string v = get_string(key, fallback);
    if (std::find(allowed.begin(), allowed.end(), v) == allowed.end()) {
        std::string list;
        for (const auto& a : allowed) list += (list.empty() ? "" : "|") + a;
        fail(Errc::ConfigError, fmt::format("{}: '{}' is not one of {}", key, v, list));
    }
    return v;
}

double Config::get_double(const std::string& key, double fallback) const
{
    const auto* v = raw(key);
    const double out = v ? parse_double(key, *v) : fallback;
    record(key, fmt_double(out));
    return out;
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const
{
    const auto* v = raw(key);
    const std::uint64_t out = v ? parse_u64(key, *v) : fallback;
    record(key, std::to_string(out));
    return out;
}

std::size_t Config::get_size(const std::string& key, std::size_t fallback) const
{
    return static_cast<std::size_t>(get_u64(key, fallback));
}

bool Config::get_bool(const std::string& key, bool fallback) const
{
    const auto* v = raw(key);
    bool out = fallback;
    if (v) {
        const auto t = trim(*v);
        if (t == "true" || t == "1")
            out = true;
        else if (t == "false" || t == "0")
            out = false;
        else
            bad_value(key, *v, "a boolean");
    }
    record(key, out ? "true" : "false");
    return out;
}

std::vector<double> Config::get_doubles(const std::string& key, const std::vector<double>& fallback) const
{
    const auto* v = raw(key);
    std::vector<double> out = fallback;
    if (v) {
        out.clear();
        for (const auto& item : split_list(*v)) out.push_back(parse_double(key, item));
    }
    std::string text;
    for (double d : out) text += (text.empty() ? "" : ",") + fmt_double(d);
    record(key, text);
    return out;
}

std::vector<std::size_t> Config::get_sizes(const std::string& key, const std::vector<std::size_t>& fallback) const
{
    const auto* v = raw(key);
    std::vector<std::size_t> out = fallback;
    if (v) {
        out.clear();
        for (const auto& item : split_list(*v)) out.push_back(static_cast<std::size_t>(parse_u64(key, item)));
    }
    std::string text;
    for (auto d : out) text += (text.empty() ? "" : ",") + std::to_string(d);
    record(key, text);
    return out;
}

std::vector<std::string> Config::get_strings(const std::string& key, const std::vector<std::string>& fallback) const
{
    const auto* v = raw(key);
    std::vector<std::string> out = v ? split_list(*v) : fallback;
    std::string text;
    for (const auto& s : out) text += (text.empty() ? "" : ",") + s;
    record(key, text);
    return out;
}

void Config::reject_unused() const
{
    for (const auto& [key, value] : values_)
        if (!resolved_.count(key)) fail(Errc::ConfigError, fmt::format("unknown or unused config key '{}'", key));
}

std::string Config::canonical() const
{
    std::ostringstream out;
    for (const auto& [key, value] : resolved_) out << key << '=' << value << '\n';
    return out.str();
}

std::uint64_t Config::hash() const { return fnv1a64(canonical()); }

}  // namespace smc::cli
