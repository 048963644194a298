#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <filesystem>
#include <iterator>
#include <map>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "topometric/errors.hpp"
#include "topometric/fusion.hpp"
#include "topometric/io.hpp"

namespace topometric {

/// Flat `key = value` text configuration. Blank lines and lines starting
/// with '#' are ignored; keys may appear once.
class KeyValues {
public:
    KeyValues() = default;

    static KeyValues parse(std::string_view text, std::string_view source = "config") {
        KeyValues kv;
        std::size_t line_no = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            const std::size_t nl = text.find('\n', pos);
            std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
            ++line_no;
            line = trim(line);
            if (!line.empty() && line.front() != '#') {
                const std::size_t eq = line.find('=');
                if (eq == std::string_view::npos) {
                    throw ConfigError(std::string(source) + ":" + std::to_string(line_no) + ": expected 'key = value'");
                }
                const std::string key(trim(line.substr(0, eq)));
                const std::string value(trim(line.substr(eq + 1)));
                if (key.empty()) {
                    throw ConfigError(std::string(source) + ":" + std::to_string(line_no) + ": empty key");
                }
                if (!kv.values_.emplace(key, value).second) {
                    throw ConfigError(std::string(source) + ":" + std::to_string(line_no) + ": duplicate key '" + key +
                                      "'");
                }
            }
            if (nl == std::string_view::npos) break;
            pos = nl + 1;
        }
        return kv;
    }

    static KeyValues load(const std::filesystem::path& path) {
        std::string text;
        try {
            text = io::read_file(path);
        } catch (const IoError& e) {
            throw ConfigError(e.what());
        }
        return parse(text, path.string());
    }

    bool has(const std::string& key) const { return values_.contains(key); }
    void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
    void erase(const std::string& key) { values_.erase(key); }
    const std::map<std::string, std::string>& entries() const { return values_; }

    std::string get_string(const std::string& key, const std::string& fallback) const {
        const auto it = values_.find(key);
        return it == values_.end() ? fallback : it->second;
    }

    double get_double(const std::string& key, double fallback) const {
        const auto it = values_.find(key);
        return it == values_.end() ? fallback : to_number<double>(key, it->second);
    }

    long get_long(const std::string& key, long fallback) const {
        const auto it = values_.find(key);
        return it == values_.end() ? fallback : to_number<long>(key, it->second);
    }

    /// Comma-separated list of numbers.
    std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const {
        const auto it = values_.find(key);
        if (it == values_.end()) {
            return fallback;
        }
        return parse_list(key, it->second);
    }

    static std::vector<double> parse_list(std::string_view key, std::string_view text) {
        std::vector<double> out;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            const std::size_t comma = text.find(',', pos);
            const std::string_view item =
                trim(text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
            out.push_back(to_number<double>(key, item));
            if (comma == std::string_view::npos) break;
            pos = comma + 1;
        }
        return out;
    }

    template <class T>
    static T to_number(std::string_view key, std::string_view text) {
        T value{};
        const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
        if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
            throw ConfigError("key '" + std::string(key) + "': invalid number '" + std::string(text) + "'");
        }
        return value;
    }

    static std::string_view trim(std::string_view s) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
        return s;
    }

private:
    std::map<std::string, std::string> values_;
};

inline constexpr std::string_view kFusionKeys[] = {"delta", "lambda_s", "lambda_tr", "lambda_theta", "t_w", "bandwidth"};

/// Fusion parameters from `kv`; missing keys keep the defaults in `base`.
inline FusionConfig fusion_config_from(const KeyValues& kv, FusionConfig base = {}) {
    base.delta = kv.get_double("delta", base.delta);
    base.lambda_s = kv.get_double("lambda_s", base.lambda_s);
    base.lambda_tr = kv.get_double("lambda_tr", base.lambda_tr);
    base.lambda_theta = kv.get_double("lambda_theta", base.lambda_theta);
    base.t_w = kv.get_long("t_w", base.t_w);
    base.bandwidth = kv.get_double("bandwidth", base.bandwidth);
    try {
        base.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return base;
}

inline FusionConfig load_fusion_config(const std::filesystem::path& path) {
    const KeyValues kv = KeyValues::load(path);
    for (const auto& [key, value] : kv.entries()) {
        if (std::find(std::begin(kFusionKeys), std::end(kFusionKeys), key) == std::end(kFusionKeys)) {
            throw ConfigError(path.string() + ": unknown fusion key '" + key + "'");
        }
    }
    return fusion_config_from(kv);
}

}  // namespace topometric
