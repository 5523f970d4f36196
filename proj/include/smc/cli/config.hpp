#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace smc::cli {

/**
 * Flat key/value experiment configuration ("section.key" -> text).
 *
 * Typed getters record the value they resolved, defaults included, so the
 * canonical form and its hash describe the effective configuration. Keys
 * that no getter asked for are rejected by `reject_unused`.
 */
class Config {
public:
    Config() = default;

    static Config parse_toml(std::istream& in);
    static Config load(const std::filesystem::path& path);

    /// Applies one "key=value" override; later overrides win.
    void set(std::string_view assignment);
    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;

    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::string get_choice(const std::string& key, const std::string& fallback,
                           const std::vector<std::string>& allowed) const;
    double get_double(const std::string& key, double fallback) const;
    std::size_t get_size(const std::string& key, std::size_t fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_doubles(const std::string& key, const std::vector<double>& fallback) const;
    std::vector<std::size_t> get_sizes(const std::string& key, const std::vector<std::size_t>& fallback) const;
    std::vector<std::string> get_strings(const std::string& key, const std::vector<std::string>& fallback) const;
    /// Value if present, without a default.
    std::optional<std::string> find(const std::string& key) const;

    /// ConfigError naming the first key that was never read.
    void reject_unused() const;

    /// Sorted "key=value" lines of every resolved value.
    std::string canonical() const;
    std::uint64_t hash() const;

private:
    const std::string* raw(const std::string& key) const;
    void record(const std::string& key, std::string value) const;

    std::map<std::string, std::string> values_;
    mutable std::map<std::string, std::string> resolved_;
};

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view data) noexcept;

/// Splits "a, b, c" or "[a, b, c]" into trimmed items.
std::vector<std::string> split_list(std::string_view text);

}  // namespace smc::cli
