#include "translume/cli.hpp"
#include "translume/emission.hpp"
#include "translume/errors.hpp"
#include "translume/floquet.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace translume::cli {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Format parse_format(const std::string& s) {
    if (s == "csv") return Format::Csv;
    if (s == "json") return Format::Json;
    throw ConfigError("format: expected csv or json, got '" + s + "'");
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct Entry {
    std::string value;
    int line;
};

class Parser {
public:
    Parser(std::string source) : source_(std::move(source)) {}

    [[noreturn]] void fail(int line, const std::string& key, const std::string& why) const {
        std::string msg = source_ + ":" + std::to_string(line) + ": ";
        if (!key.empty()) msg += key + ": ";
        throw ConfigError(msg + why);
    }

    double to_double(const Entry& e, const std::string& key) const {
        const std::string v = trim(e.value);
        if (v.empty()) fail(e.line, key, "missing value");
        char* end = nullptr;
        errno = 0;
        const double d = std::strtod(v.c_str(), &end);
        if (end != v.c_str() + v.size() || errno == ERANGE || !std::isfinite(d)) {
            fail(e.line, key, "expected a finite number, got '" + v + "'");
        }
        return d;
    }

    int to_int(const Entry& e, const std::string& key) const {
        const double d = to_double(e, key);
        if (d != std::floor(d) || std::abs(d) > 1e9) fail(e.line, key, "expected an integer, got '" + trim(e.value) + "'");
        return static_cast<int>(d);
    }

    bool to_bool(const Entry& e, const std::string& key) const {
        const std::string v = trim(e.value);
        if (v == "true") return true;
        if (v == "false") return false;
        fail(e.line, key, "expected true or false, got '" + v + "'");
    }

    std::vector<double> to_list(const Entry& e, const std::string& key, bool allow_empty) const {
        std::vector<double> out;
        const std::string v = trim(e.value);
        if (v.empty()) {
            if (!allow_empty) fail(e.line, key, "empty list");
            return out;
        }
        std::stringstream ss(v);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(to_double({item, e.line}, key));
        if (v.back() == ',') fail(e.line, key, "trailing comma");
        return out;
    }

    std::string source_;
};

using Handler = std::function<void(const Parser&, const Entry&, RunConfig&)>;

struct KeySpec {
    std::string section;
    std::string key;
    Handler apply;
    std::function<std::string(const RunConfig&)> write;
};

std::string list_text(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += format_double(v[i]);
    }
    return s;
}

#define TL_DOUBLE(sec, name, member)                                                                           \
    KeySpec {                                                                                                  \
        sec, name, [](const Parser& p, const Entry& e, RunConfig& c) { c.member = p.to_double(e, name); },      \
            [](const RunConfig& c) { return format_double(c.member); }                                         \
    }
#define TL_INT(sec, name, member)                                                                              \
    KeySpec {                                                                                                  \
        sec, name, [](const Parser& p, const Entry& e, RunConfig& c) { c.member = p.to_int(e, name); },         \
            [](const RunConfig& c) { return std::to_string(c.member); }                                        \
    }

const std::vector<KeySpec>& key_specs() {
    static const std::vector<KeySpec> specs = {
        TL_DOUBLE("grating", "eps_b", grating.eps_b),
        TL_DOUBLE("grating", "alpha", grating.alpha),
        TL_DOUBLE("grating", "g", grating.g),
        TL_DOUBLE("grating", "Omega", grating.Omega),
        TL_DOUBLE("grating", "d", grating.d),
        TL_DOUBLE("grating", "c0", grating.c0),
        TL_DOUBLE("grating", "hbar", grating.hbar),
        TL_DOUBLE("grating", "kB", grating.kB),
        {"rays", "x0", [](const Parser& p, const Entry& e, RunConfig& c) { c.rays.x0 = p.to_list(e, "x0", true); },
         [](const RunConfig& c) { return list_text(c.rays.x0); }},
        {"rays", "from_horizon",
         [](const Parser& p, const Entry& e, RunConfig& c) { c.rays.from_horizon = p.to_bool(e, "from_horizon"); },
         [](const RunConfig& c) { return std::string(c.rays.from_horizon ? "true" : "false"); }},
        TL_DOUBLE("rays", "t0", rays.t0),
        TL_DOUBLE("rays", "t_end", rays.t_end),
        TL_DOUBLE("rays", "rtol", rays.rtol),
        TL_DOUBLE("spectrum", "k_tilde", spectrum.k_tilde),
        TL_INT("spectrum", "n", spectrum.n),
        TL_INT("spectrum", "n_prime_min", spectrum.n_prime_min),
        TL_INT("spectrum", "n_prime_max", spectrum.n_prime_max),
        {"vacuum", "d_list",
         [](const Parser& p, const Entry& e, RunConfig& c) { c.vacuum.d_list = p.to_list(e, "d_list", true); },
         [](const RunConfig& c) { return list_text(c.vacuum.d_list); }},
        TL_INT("vacuum", "points", vacuum.points),
        TL_DOUBLE("vacuum", "span", vacuum.span),
        TL_INT("vacuum", "n_max", vacuum.n_max),
        TL_DOUBLE("vacuum", "fit_omega_min", vacuum.fit_omega_min),
        TL_DOUBLE("vacuum", "fit_omega_max", vacuum.fit_omega_max),
        TL_DOUBLE("stimulated", "k_tilde", stimulated.k_tilde),
        TL_INT("stimulated", "n", stimulated.n),
        {"stimulated", "engine",
         [](const Parser&, const Entry& e, RunConfig& c) { c.stimulated.engine = trim(e.value); },
         [](const RunConfig& c) { return c.stimulated.engine; }},
        TL_DOUBLE("stimulated", "probe", stimulated.probe),
        {"sweep", "target", [](const Parser&, const Entry& e, RunConfig& c) { c.sweep.target = trim(e.value); },
         [](const RunConfig& c) { return c.sweep.target; }},
        {"output", "dir", [](const Parser&, const Entry& e, RunConfig& c) { c.output.dir = trim(e.value); },
         [](const RunConfig& c) { return c.output.dir; }},
        {"output", "format",
         [](const Parser& p, const Entry& e, RunConfig& c) {
             try {
                 c.output.format = parse_format(trim(e.value));
             } catch (const ConfigError& ex) {
                 p.fail(e.line, "", ex.what());
             }
         },
         [](const RunConfig& c) { return std::string(c.output.format == Format::Csv ? "csv" : "json"); }},
    };
    return specs;
}

#undef TL_DOUBLE
#undef TL_INT

const std::vector<std::string> kSections = {"grating", "rays", "spectrum", "vacuum", "stimulated", "sweep", "output"};
const std::vector<std::string> kSweepKeys = {"eps_b", "alpha", "g", "Omega", "d", "c0", "k_tilde", "n"};

}  // namespace

RunConfig parse_run_config(const std::string& text, const std::string& source) {
    Parser p(source);
    RunConfig cfg;
    std::map<std::string, int> seen;  // "section.key" -> line
    std::map<std::string, int> section_lines;
    std::string section;

    std::stringstream ss(text);
    std::string raw;
    int line = 0;
    while (std::getline(ss, raw)) {
        ++line;
        std::string s = trim(raw);
        if (s.empty() || s[0] == '#' || s[0] == ';') continue;
        // Trailing comments need whitespace before the '#'.
        for (std::size_t i = 1; i < s.size(); ++i) {
            if (s[i] == '#' && (s[i - 1] == ' ' || s[i - 1] == '\t')) {
                s = trim(s.substr(0, i));
                break;
            }
        }
        if (s.front() == '[') {
            if (s.back() != ']') p.fail(line, "", "unterminated section header");
            section = trim(s.substr(1, s.size() - 2));
            if (std::find(kSections.begin(), kSections.end(), section) == kSections.end()) {
                p.fail(line, "", "unknown section [" + section + "]");
            }
            if (section_lines.count(section)) p.fail(line, "", "duplicate section [" + section + "]");
            section_lines[section] = line;
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) p.fail(line, "", "expected 'key = value'");
        const std::string key = trim(s.substr(0, eq));
        const Entry entry{s.substr(eq + 1), line};
        if (key.empty()) p.fail(line, "", "missing key");
        if (section.empty()) p.fail(line, key, "key outside any section");
        const std::string full = section + "." + key;
        if (seen.count(full)) p.fail(line, key, "duplicate key (first set on line " + std::to_string(seen[full]) + ")");
        seen[full] = line;

        if (section == "sweep" && key != "target") {
            if (std::find(kSweepKeys.begin(), kSweepKeys.end(), key) == kSweepKeys.end()) {
                p.fail(line, key, "not a sweepable parameter");
            }
            cfg.sweep.lists.emplace_back(key, p.to_list(entry, key, false));
            continue;
        }
        const auto& specs = key_specs();
        const auto it = std::find_if(specs.begin(), specs.end(),
                                     [&](const KeySpec& k) { return k.section == section && k.key == key; });
        if (it == specs.end()) p.fail(line, key, "unknown key in [" + section + "]");
        it->apply(p, entry, cfg);
    }

    auto line_of = [&](const std::string& sec, const std::string& key) {
        const auto it = seen.find(sec + "." + key);
        if (it != seen.end()) return it->second;
        const auto st = section_lines.find(sec);
        return st != section_lines.end() ? st->second : 0;
    };

    try {
        cfg.grating.validate();
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        const std::string field = msg.substr(0, msg.find(':'));
        p.fail(line_of("grating", field), "", msg);
    }
    auto check = [&](bool ok, const std::string& sec, const std::string& key, const std::string& why) {
        if (!ok) p.fail(line_of(sec, key), key, why);
    };
    check(cfg.rays.t_end > cfg.rays.t0, "rays", "t_end", "must exceed t0");
    check(cfg.rays.rtol > 0.0 && cfg.rays.rtol < 1.0, "rays", "rtol", "must lie in (0, 1)");
    check(cfg.spectrum.n_prime_min <= cfg.spectrum.n_prime_max, "spectrum", "n_prime_min", "must not exceed n_prime_max");
    check(cfg.spectrum.k_tilde >= 0.0 && cfg.spectrum.k_tilde < cfg.grating.g, "spectrum", "k_tilde", "must lie in [0, g)");
    check(cfg.vacuum.points >= 3, "vacuum", "points", "must be >= 3");
    check(cfg.vacuum.span > 0.0, "vacuum", "span", "must be > 0");
    check(cfg.vacuum.n_max >= 0 && cfg.vacuum.n_max <= kMaxRungs, "vacuum", "n_max",
          "must lie in [0, " + std::to_string(kMaxRungs) + "]");
    for (double d : cfg.vacuum.d_list) check(d >= 0.0, "vacuum", "d_list", "window lengths must be >= 0");
    check(cfg.vacuum.fit_omega_min >= 0.0, "vacuum", "fit_omega_min", "must be >= 0");
    check(cfg.vacuum.fit_omega_max >= 0.0, "vacuum", "fit_omega_max", "must be >= 0");
    check(cfg.stimulated.k_tilde >= 0.0 && cfg.stimulated.k_tilde < cfg.grating.g, "stimulated", "k_tilde",
          "must lie in [0, g)");
    check(cfg.stimulated.k_tilde + cfg.stimulated.n * cfg.grating.g > 0.0, "stimulated", "n",
          "input rung k_tilde + n g must be positive");
    check(cfg.stimulated.probe >= 0.0, "stimulated", "probe", "must be >= 0");
    try {
        (void)parse_engine(cfg.stimulated.engine);
    } catch (const ConfigError& e) {
        p.fail(line_of("stimulated", "engine"), "", e.what());
    }
    check(cfg.sweep.target == "stimulated" || cfg.sweep.target == "vacuum", "sweep", "target",
          "expected stimulated or vacuum, got '" + cfg.sweep.target + "'");
    check(!cfg.output.dir.empty(), "output", "dir", "must not be empty");
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string() + ": cannot open configuration file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str(), path.string());
}

std::string serialize(const RunConfig& cfg) {
    std::string out;
    for (const auto& sec : kSections) {
        out += "[" + sec + "]\n";
        for (const auto& k : key_specs()) {
            if (k.section == sec) out += k.key + " = " + k.write(cfg) + "\n";
        }
        if (sec == "sweep") {
            for (const auto& [key, values] : cfg.sweep.lists) out += key + " = " + list_text(values) + "\n";
        }
        out += "\n";
    }
    return out;
}

}  // namespace translume::cli
