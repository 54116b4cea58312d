#include "ramimo/system_config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace ramimo {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(std::string_view key, std::string_view v) {
    try {
        std::size_t used = 0;
        const double x = std::stod(std::string(v), &used);
        if (used != v.size()) throw std::invalid_argument("trailing junk");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("bad numeric value for '" + std::string(key) + "': " + std::string(v));
    }
}

long long parse_int(std::string_view key, std::string_view v) {
    long long x = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || p != v.data() + v.size())
        throw ConfigError("bad integer value for '" + std::string(key) + "': " + std::string(v));
    return x;
}

} // namespace

void SystemConfig::validate() const {
    const auto fail = [](const std::string& msg) { throw ConfigError(msg); };
    if (m_antennas < 1) fail("m_antennas must be >= 1");
    if (n_subcarriers < 2) fail("n_subcarriers must be >= 2");
    if (q_symbols < 1) fail("q_symbols must be >= 1");
    if (n_fft < 1) fail("n_fft must be >= 1");
    if (!(bandwidth_hz > 0.0)) fail("bandwidth_hz must be positive");
    if (!(cell_radius_m > 0.0)) fail("cell_radius_m must be positive");
    if (min_distance_m < 0.0) fail("min_distance_m must be non-negative");
    if (min_distance_m >= cell_radius_m) fail("min_distance_m must be smaller than cell_radius_m");
    if (n_active < 0) fail("n_active must be non-negative");
    if (std::isnan(snr_db)) fail("snr_db must be a number or inf");
    if (!(pathloss_exponent > 0.0)) fail("pathloss_exponent must be positive");
    if (!(detect_match_tol > 0.0)) fail("detect_match_tol must be positive");
    if (!(root_unit_circle_tol > 0.0)) fail("root_unit_circle_tol must be positive");
    if (max_rounds < 1) fail("max_rounds must be >= 1");
    // The delay of the farthest UE must stay inside one code spacing of the
    // offset domain, otherwise timing is not recoverable from an offset.
    if (!(max_timing_error() / n_fft < 1.0 / n_subcarriers)) {
        std::ostringstream os;
        os << "cell too large for the pilot grid: max timing error "
           << max_timing_error() << " samples needs theta/n_fft < 1/"
           << n_subcarriers;
        fail(os.str());
    }
}

SystemConfig SystemConfig::from_text(std::string_view text) {
    SystemConfig cfg;
    using Setter = std::function<void(SystemConfig&, std::string_view, std::string_view)>;
    static const std::map<std::string, Setter, std::less<>> setters = {
        {"m_antennas", [](SystemConfig& c, auto k, auto v) { c.m_antennas = static_cast<int>(parse_int(k, v)); }},
        {"n_subcarriers", [](SystemConfig& c, auto k, auto v) { c.n_subcarriers = static_cast<int>(parse_int(k, v)); }},
        {"q_symbols", [](SystemConfig& c, auto k, auto v) { c.q_symbols = static_cast<int>(parse_int(k, v)); }},
        {"n_fft", [](SystemConfig& c, auto k, auto v) { c.n_fft = static_cast<int>(parse_int(k, v)); }},
        {"bandwidth_hz", [](SystemConfig& c, auto k, auto v) { c.bandwidth_hz = parse_double(k, v); }},
        {"cell_radius_m", [](SystemConfig& c, auto k, auto v) { c.cell_radius_m = parse_double(k, v); }},
        {"min_distance_m", [](SystemConfig& c, auto k, auto v) { c.min_distance_m = parse_double(k, v); }},
        {"n_active", [](SystemConfig& c, auto k, auto v) { c.n_active = static_cast<int>(parse_int(k, v)); }},
        {"snr_db", [](SystemConfig& c, auto k, auto v) { c.snr_db = parse_double(k, v); }},
        {"pathloss_exponent", [](SystemConfig& c, auto k, auto v) { c.pathloss_exponent = parse_double(k, v); }},
        {"detect_match_tol", [](SystemConfig& c, auto k, auto v) { c.detect_match_tol = parse_double(k, v); }},
        {"root_unit_circle_tol", [](SystemConfig& c, auto k, auto v) { c.root_unit_circle_tol = parse_double(k, v); }},
        {"max_rounds", [](SystemConfig& c, auto k, auto v) { c.max_rounds = static_cast<int>(parse_int(k, v)); }},
        {"seed", [](SystemConfig& c, auto k, auto v) { c.seed = static_cast<std::uint64_t>(parse_int(k, v)); }},
    };

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
        const auto key = trim(line.substr(0, eq));
        const auto val = trim(line.substr(eq + 1));
        const auto it = setters.find(key);
        if (it == setters.end())
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
        it->second(cfg, key, val);
    }
    cfg.validate();
    return cfg;
}

SystemConfig SystemConfig::from_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::ios_base::failure("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw std::ios_base::failure("error reading config file: " + path);
    return from_text(buf.str());
}

} // namespace ramimo
