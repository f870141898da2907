#pragma once

// Batch front end: run configuration files, command drivers and the CSV/JSON
// table writer shared by all commands.
//
// Configuration files are INI-like:
//
//     # comment
//     [grating]
//     alpha = 0.05
//     [sweep]
//     d = 20, 40
//
// Keys are case-sensitive and every key belongs to exactly one section.

#include "translume/grating.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace translume::cli {

enum class Format { Csv, Json };

struct RaysBlock {
    /// Launch points: lab positions at t0, or offsets from the first
    /// accumulation horizon when `from_horizon` is set.
    std::vector<double> x0 = {0.0, 1.0, 2.0, 3.0, 4.0, 5.0};
    bool from_horizon = false;
    double t0 = 0.0;
    double t_end = 100.0;
    double rtol = 1e-10;

    friend bool operator==(const RaysBlock&, const RaysBlock&) = default;
};

struct SpectrumBlock {
    double k_tilde = 0.75;
    int n = 1;
    int n_prime_min = -40;
    int n_prime_max = -1;

    friend bool operator==(const SpectrumBlock&, const SpectrumBlock&) = default;
};

struct VacuumBlock {
    /// Window lengths; empty means the single value grating.d.
    std::vector<double> d_list;
    int points = 512;
    double span = 3.0;   // grid covers (0, span * Omega)
    int n_max = 0;       // 0 selects automatic truncation
    double fit_omega_min = 0.0;
    double fit_omega_max = 0.0;  // 0 means no upper limit

    friend bool operator==(const VacuumBlock&, const VacuumBlock&) = default;
};

struct StimulatedBlock {
    double k_tilde = 0.75;
    int n = 1;
    std::string engine = "analytic";
    double probe = 0.0;  // alias probe frequency; 0 uses the input frequency

    friend bool operator==(const StimulatedBlock&, const StimulatedBlock&) = default;
};

struct SweepBlock {
    std::string target = "stimulated";  // stimulated | vacuum
    /// Swept keys in declaration order; the first varies slowest.
    std::vector<std::pair<std::string, std::vector<double>>> lists;

    friend bool operator==(const SweepBlock&, const SweepBlock&) = default;
};

struct OutputBlock {
    std::string dir = ".";
    Format format = Format::Csv;

    friend bool operator==(const OutputBlock&, const OutputBlock&) = default;
};

struct RunConfig {
    GratingConfig grating;
    RaysBlock rays;
    SpectrumBlock spectrum;
    VacuumBlock vacuum;
    StimulatedBlock stimulated;
    SweepBlock sweep;
    OutputBlock output;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Throws ConfigError with "<source>:<line>: <key>: <reason>" messages.
[[nodiscard]] RunConfig parse_run_config(const std::string& text, const std::string& source = "<config>");
[[nodiscard]] RunConfig load_run_config(const std::filesystem::path& path);
/// Every field written with 17 significant digits; parses back to an equal RunConfig.
[[nodiscard]] std::string serialize(const RunConfig& cfg);

[[nodiscard]] std::string format_double(double v);
[[nodiscard]] Format parse_format(const std::string& s);

using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

/// CSV: "# translume <version>" line, header row, one line per row.
/// JSON: {"tool": "translume <version>", "columns": [...], "rows": [[...]]}.
/// `stem` gets the .csv or .json extension. Returns the written path.
std::filesystem::path write_table(const Table& table, const std::filesystem::path& stem, Format format);
[[nodiscard]] std::string render_table(const Table& table, Format format);

[[nodiscard]] const char* version();

struct Invocation {
    std::string command;
    std::filesystem::path config;
    std::string out_dir;      // empty keeps the config value
    std::string format;       // empty keeps the config value
    std::string engine;       // empty keeps the config value
    int workers = 0;          // 0 means hardware concurrency
};

/// Runs one command; returns the process exit code (0 ok, 2 configuration
/// error, 3 numerical failure). Summary lines go to `out`, diagnostics to `err`.
int run(const Invocation& inv, std::ostream& out, std::ostream& err);

/// TRANSLUME_WORKERS when set (ConfigError unless a positive integer), else
/// `requested`, else hardware concurrency.
[[nodiscard]] int resolve_workers(int requested);

}  // namespace translume::cli
