#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nhdqpt/ssh_model.hpp"

namespace nhdqpt::cli {

inline constexpr std::string_view kVersion = "0.1.0";

enum class Command { PhaseDiagram, Spectrum, Quench, FisherZeros, Winding, Critical };
enum class Format { Csv, Json, Svg };

std::string_view to_string(Command c);
std::string_view to_string(Format f);

// Fully resolved batch job. `out` is a path stem: data goes to `<out>.<format>`
// and the manifest to `<out>.manifest.json`.
struct ExperimentConfig {
    Command command = Command::Quench;
    ssh::Params initial{0.5, 0.4};
    ssh::Params final{2.0, 0.4};
    std::int64_t kpoints = 2000;
    std::int64_t tpoints = 2000;
    double t_max = 10.0;
    std::int64_t branch = 0;
    std::string out = "nhdqpt_out";
    Format format = Format::Csv;

    // Throws ValidationError naming the violated bound.
    void validate() const;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// Thrown by parse_config for -h/--help; carries the usage text.
struct HelpRequested {
    std::string text;
};

// Command-line tokens without the program name. `--config FILE` loads a
// key=value file (or a run manifest) first; explicit flags override it.
// Throws ParseError naming the offending token and ValidationError on bounds.
ExperimentConfig parse_config(const std::vector<std::string>& args);

// key=value lines, '#' comments, or a JSON object (a manifest's "config" member
// is used when present). The command must be among the keys.
ExperimentConfig parse_config_text(std::string_view text);

// key=value text accepted by parse_config_text; doubles keep 17 significant digits.
std::string render(const ExperimentConfig& config);

// Shortest fixed-width rendering used for every emitted float: 17 significant
// digits, '.' decimal point, "nan"/"inf" for non-finite values.
std::string format_double(double x);

std::string sha256_hex(std::string_view bytes);

using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

struct Series {
    std::string name;
    std::vector<double> xs;
    std::vector<double> ys;
    bool markers = false;  // draw points instead of a polyline
};

struct Plot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
};

struct Result {
    Table table;
    Plot plot;
};

// Runs the computation for config.command without touching the filesystem.
Result compute(const ExperimentConfig& config);

std::string to_csv(const Table& table);
std::string to_json(const Table& table, Command command);
std::string to_svg(const Plot& plot);

struct OutputFile {
    std::string path;
    std::string sha256;
    std::uint64_t bytes = 0;
};

struct ResultManifest {
    std::string command;
    ExperimentConfig config;
    std::string version{kVersion};
    double wall_seconds = 0.0;
    std::vector<OutputFile> files;
};

std::string manifest_json(const ResultManifest& manifest);

// Computes, writes the data file and the manifest, and returns the manifest.
ResultManifest run(const ExperimentConfig& config);

// Full front end: exit code 0 iff no error; failures print one line to `err`.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nhdqpt::cli
