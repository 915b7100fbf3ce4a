#include "kdvlab/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "kdvlab/errors.hpp"

namespace kdvlab {

namespace {

std::string valid_keys() {
    std::string out;
    for (const auto& k : config_keys()) out += (out.empty() ? "" : ", ") + k;
    return out;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected) {
    throw DomainError(ErrorCode::InvalidConfig, "key '" + std::string(key) + "': cannot read '" + std::string(value) +
                                                    "' as " + std::string(expected));
}

double parse_real(std::string_view key, std::string_view text) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) bad_value(key, text, "a real number");
    return v;
}

long long parse_int(std::string_view key, std::string_view text) {
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) bad_value(key, text, "an integer");
    return v;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {"a",  "b", "c",          "epsilon",         "L",           "regime",
                                                  "n",  "dt", "T",         "snapshot_stride", "weight_beta", "seed",
                                                  "disturbance", "disturbance_file"};
    return keys;
}

void apply_setting(RunConfig& config, std::string_view key, std::string_view raw) {
    const std::string_view value = trim(raw);
    SystemParams& p = config.params;
    if (key == "a") p.a = parse_real(key, value);
    else if (key == "b") p.b = parse_real(key, value);
    else if (key == "c") p.c = parse_real(key, value);
    else if (key == "epsilon") p.epsilon = parse_real(key, value);
    else if (key == "L") p.L = parse_real(key, value);
    else if (key == "regime") p.regime = parse_regime(value);
    else if (key == "n") {
        const long long n = parse_int(key, value);
        if (n < 8 || n > 1000000) bad_value(key, value, "an interval count in [8, 1e6]");
        config.n = static_cast<int>(n);
    } else if (key == "dt") {
        config.dt = parse_real(key, value);
        if (!(config.dt > 0.0)) bad_value(key, value, "a positive step");
    } else if (key == "T") {
        config.T = parse_real(key, value);
        if (!(config.T >= 0.0)) bad_value(key, value, "a nonnegative horizon");
    } else if (key == "snapshot_stride") {
        const long long s = parse_int(key, value);
        if (s < 0 || s > 1000000000) bad_value(key, value, "a nonnegative stride");
        config.snapshot_stride = static_cast<int>(s);
    } else if (key == "weight_beta") {
        config.weight_beta = parse_real(key, value);
        if (!(config.weight_beta >= 0.0)) bad_value(key, value, "a nonnegative slope");
    } else if (key == "seed") {
        const long long s = parse_int(key, value);
        if (s < 0) bad_value(key, value, "a nonnegative integer");
        config.seed = static_cast<std::uint64_t>(s);
    } else if (key == "disturbance") {
        if (value != "none" && value != "mms" && value != "file") bad_value(key, value, "one of none, mms, file");
        config.disturbance = std::string(value);
    } else if (key == "disturbance_file") {
        config.disturbance_file = std::string(value);
    } else {
        throw DomainError(ErrorCode::InvalidConfig,
                          "unknown key '" + std::string(key) + "' (valid keys: " + valid_keys() + ")");
    }
}

void apply_config_text(RunConfig& config, std::string_view text, std::string_view origin) {
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view s = line;
        if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string_view::npos) {
            throw DomainError(ErrorCode::InvalidConfig,
                              std::string(origin) + ":" + std::to_string(lineno) + ": expected key = value");
        }
        apply_setting(config, trim(s.substr(0, eq)), s.substr(eq + 1));
    }
}

void apply_config_file(RunConfig& config, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError(ErrorCode::InvalidConfig, "cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    apply_config_text(config, buf.str(), path);
}

std::string env_name(std::string_view key) {
    std::string out = "KDVLAB_";
    for (char ch : key) out += static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    return out;
}

void apply_environment(RunConfig& config, const EnvLookup& lookup) {
    for (const auto& key : config_keys()) {
        if (const char* v = lookup(env_name(key).c_str())) apply_setting(config, key, v);
    }
}

std::string format_real(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

std::string format_value(const RunConfig& config, std::string_view key) {
    const SystemParams& p = config.params;
    if (key == "a") return format_real(p.a);
    if (key == "b") return format_real(p.b);
    if (key == "c") return format_real(p.c);
    if (key == "epsilon") return format_real(p.epsilon);
    if (key == "L") return format_real(p.L);
    if (key == "regime") return std::string(to_string(p.regime));
    if (key == "n") return std::to_string(config.n);
    if (key == "dt") return format_real(config.dt);
    if (key == "T") return format_real(config.T);
    if (key == "snapshot_stride") return std::to_string(config.snapshot_stride);
    if (key == "weight_beta") return format_real(config.weight_beta);
    if (key == "seed") return std::to_string(config.seed);
    if (key == "disturbance") return config.disturbance;
    if (key == "disturbance_file") return config.disturbance_file;
    throw DomainError(ErrorCode::InvalidConfig, "unknown key '" + std::string(key) + "' (valid keys: " + valid_keys() + ")");
}

std::map<std::string, std::string> resolved(const RunConfig& config) {
    std::map<std::string, std::string> out;
    for (const auto& key : config_keys()) out[key] = format_value(config, key);
    return out;
}

}  // namespace kdvlab
