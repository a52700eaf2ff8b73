#include "nhdqpt/cli.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "nhdqpt/dqpt_analysis.hpp"
#include "nhdqpt/errors.hpp"

namespace nhdqpt::cli {

namespace {

using RawConfig = std::map<std::string, std::string>;

constexpr std::array<std::pair<Command, std::string_view>, 6> kCommands{{
    {Command::PhaseDiagram, "phase-diagram"},
    {Command::Spectrum, "spectrum"},
    {Command::Quench, "quench"},
    {Command::FisherZeros, "fisher-zeros"},
    {Command::Winding, "winding"},
    {Command::Critical, "critical"},
}};

constexpr std::array<std::pair<Format, std::string_view>, 3> kFormats{{
    {Format::Csv, "csv"},
    {Format::Json, "json"},
    {Format::Svg, "svg"},
}};

// Keys of the key=value form, identical to the long flag names.
constexpr std::array<std::string_view, 11> kKeys{"command", "q",      "eta",    "qf",  "etaf",  "kpoints",
                                                 "tpoints", "tmax",   "branch", "out", "format"};

// Parameter window of the phase-diagram raster.
constexpr double kPhaseWindow = 3.0;

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, std::string_view token) {
    std::string_view body = token;
    if (!body.empty() && body.front() == '+') body.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
    if (body.empty() || ec != std::errc{} || ptr != body.data() + body.size()) {
        throw ParseError("invalid number for " + key + ": '" + std::string(token) + "'");
    }
    return value;
}

std::int64_t parse_int(const std::string& key, std::string_view token) {
    std::string_view body = token;
    if (!body.empty() && body.front() == '+') body.remove_prefix(1);
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
    if (body.empty() || ec != std::errc{} || ptr != body.data() + body.size()) {
        throw ParseError("invalid integer for " + key + ": '" + std::string(token) + "'");
    }
    return value;
}

template <typename Enum, std::size_t N>
Enum parse_enum(const std::array<std::pair<Enum, std::string_view>, N>& table, const std::string& key,
                std::string_view token) {
    for (const auto& [value, name] : table) {
        if (name == token) return value;
    }
    throw ParseError("unknown " + key + " '" + std::string(token) + "'");
}

ExperimentConfig resolve(const RawConfig& raw) {
    if (raw.empty()) throw ParseError("empty input: expected a command");
    for (const auto& [key, value] : raw) {
        if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) throw ParseError("unknown key '" + key + "'");
    }
    const auto command = raw.find("command");
    if (command == raw.end()) throw ParseError("missing command");

    ExperimentConfig c;
    c.command = parse_enum(kCommands, "command", command->second);
    for (const auto& [key, value] : raw) {
        if (key == "q") c.initial.q = parse_double(key, value);
        else if (key == "eta") c.initial.eta = parse_double(key, value);
        else if (key == "qf") c.final.q = parse_double(key, value);
        else if (key == "etaf") c.final.eta = parse_double(key, value);
        else if (key == "kpoints") c.kpoints = parse_int(key, value);
        else if (key == "tpoints") c.tpoints = parse_int(key, value);
        else if (key == "tmax") c.t_max = parse_double(key, value);
        else if (key == "branch") c.branch = parse_int(key, value);
        else if (key == "out") c.out = value;
        else if (key == "format") c.format = parse_enum(kFormats, key, value);
    }
    c.validate();
    return c;
}

RawConfig json_to_raw(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed JSON configuration: ") + e.what());
    }
    const nlohmann::json& obj = doc.is_object() && doc.contains("config") ? doc["config"] : doc;
    if (!obj.is_object()) throw ParseError("JSON configuration must be an object");
    RawConfig raw;
    for (const auto& [key, value] : obj.items()) {
        if (value.is_string()) raw[key] = value.get<std::string>();
        else if (value.is_number_integer()) raw[key] = std::to_string(value.get<std::int64_t>());
        else if (value.is_number_float()) raw[key] = format_double(value.get<double>());
        else throw ParseError("unsupported JSON value for '" + key + "'");
    }
    return raw;
}

RawConfig text_to_raw(std::string_view text) {
    const std::string_view body = trim(text);
    if (!body.empty() && body.front() == '{') return json_to_raw(body);
    RawConfig raw;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto end = std::min(text.find('\n', pos), text.size());
        const std::string_view line = trim(text.substr(pos, end - pos));
        pos = end + 1;
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError("expected key=value, got '" + std::string(line) + "'");
        raw[std::string(trim(line.substr(0, eq)))] = std::string(trim(line.substr(eq + 1)));
    }
    return raw;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.close();
    if (!out) throw ValidationError("cannot write '" + path + "'");
}

QuenchSpec quench_spec(const ExperimentConfig& c) {
    QuenchSpec spec;
    spec.initial = c.initial;
    spec.final = c.final;
    spec.grid = ssh::MomentumGrid::midpoint(static_cast<std::size_t>(c.kpoints));
    spec.times = TimeGrid{c.t_max, static_cast<std::size_t>(c.tpoints)};
    spec.validate();
    return spec;
}

Result phase_diagram(const ExperimentConfig& c) {
    const std::size_t nq = static_cast<std::size_t>(c.kpoints / 10 + 1);
    const std::size_t ne = static_cast<std::size_t>(c.tpoints / 10 + 1);
    Result r;
    r.table.columns = {"q", "eta", "label"};
    r.plot = {"phase diagram", "q", "eta", {}};
    std::map<ssh::PhaseLabel, std::size_t> series_of;
    for (std::size_t i = 0; i < nq; ++i) {
        const double q = kPhaseWindow * static_cast<double>(i) / static_cast<double>(nq - 1);
        for (std::size_t j = 0; j < ne; ++j) {
            const double eta = kPhaseWindow * static_cast<double>(j) / static_cast<double>(ne - 1);
            const auto label = ssh::classify_phase({q, eta});
            r.table.rows.push_back({q, eta, std::string(ssh::to_string(label))});
            auto [it, fresh] = series_of.try_emplace(label, r.plot.series.size());
            if (fresh) r.plot.series.push_back({std::string(ssh::to_string(label)), {}, {}, true});
            r.plot.series[it->second].xs.push_back(q);
            r.plot.series[it->second].ys.push_back(eta);
        }
    }
    return r;
}

Result spectrum(const ExperimentConfig& c) {
    const auto grid = ssh::MomentumGrid::inclusive(static_cast<std::size_t>(c.kpoints));
    Result r;
    r.table.columns = {"k", "re_eps_plus", "im_eps_plus", "re_eps_minus", "im_eps_minus", "mode"};
    r.plot = {"spectrum", "k", "energy", {{"Re eps+", {}, {}}, {"Im eps+", {}, {}}, {"Re eps-", {}, {}}, {"Im eps-", {}, {}}}};
    for (double k : grid.ks) {
        const CScalar d = ssh::bloch_vector(c.initial, k).d;
        const CScalar lo = -d;
        r.table.rows.push_back({k, d.real(), d.imag(), lo.real(), lo.imag(),
                                std::string(ssh::to_string(ssh::classify_mode(c.initial, k)))});
        const std::array<double, 4> ys{d.real(), d.imag(), lo.real(), lo.imag()};
        for (std::size_t s = 0; s < 4; ++s) {
            r.plot.series[s].xs.push_back(k);
            r.plot.series[s].ys.push_back(ys[s]);
        }
    }
    return r;
}

Result quench(const ExperimentConfig& c) {
    const RateSeries series = rate_function(quench_spec(c));
    Result r;
    r.table.columns = {"t", "re_r", "im_r"};
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        r.table.rows.push_back({series.times[i], series.re_r[i], series.im_r[i]});
    }
    r.plot = {"rate function", "t", "r(t)", {{"Re r", series.times, series.re_r}, {"Im r", series.times, series.im_r}}};
    return r;
}

Result fisher(const ExperimentConfig& c) {
    const FisherZeroCurve curve = fisher_zeros(quench_spec(c), static_cast<int>(c.branch));
    Result r;
    r.table.columns = {"k", "re_z", "im_z"};
    Series s{"l = " + std::to_string(c.branch), {}, {}};
    for (std::size_t i = 0; i < curve.ks.size(); ++i) {
        r.table.rows.push_back({curve.ks[i], curve.zs[i].real(), curve.zs[i].imag()});
        s.xs.push_back(curve.zs[i].real());
        s.ys.push_back(curve.zs[i].imag());
    }
    r.plot = {"Fisher zeros", "Re z", "Im z", {std::move(s)}};
    return r;
}

Result winding(const ExperimentConfig& c) {
    const WindingSeries series = winding_number(quench_spec(c));
    Result r;
    r.table.columns = {"t", "re_nu", "im_nu", "valid"};
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        r.table.rows.push_back(
            {series.times[i], series.re_nu[i], series.im_nu[i], static_cast<std::int64_t>(series.valid[i] ? 1 : 0)});
    }
    r.plot = {"winding number", "t", "nu(t)", {{"Re nu", series.times, series.re_nu}, {"Im nu", series.times, series.im_nu}}};
    return r;
}

Result critical(const ExperimentConfig& c) {
    const CriticalSet set = critical_modes(quench_spec(c));
    Result r;
    r.table.columns = {"kind", "k", "l", "t", "bound"};
    for (double k : set.modes) r.table.rows.push_back({std::string("mode"), k, std::string(), std::string(), std::string()});
    Series times{"t_c", {}, {}, true};
    for (const auto& ct : set.times) {
        r.table.rows.push_back({std::string("time"), ct.k, static_cast<std::int64_t>(ct.l), ct.t, std::string()});
        times.xs.push_back(ct.k);
        times.ys.push_back(ct.t);
    }
    r.plot = {"critical set", "k", "t", {std::move(times)}};
    if (set.aperiodic_band) {
        const auto& b = *set.aperiodic_band;
        r.table.rows.push_back({std::string("band_lo"), b.lo, std::string(), std::string(), std::string(b.lo_open ? "open" : "closed")});
        r.table.rows.push_back({std::string("band_hi"), b.hi, std::string(), std::string(), std::string(b.hi_open ? "open" : "closed")});
        r.plot.series.push_back({"aperiodic band", {b.lo, b.hi}, {0.0, 0.0}});
    }
    return r;
}

std::string cell_text(const Cell& cell) {
    if (const auto* d = std::get_if<double>(&cell)) return format_double(*d);
    if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
    return std::get<std::string>(cell);
}

std::string json_cell(const Cell& cell) {
    if (const auto* d = std::get_if<double>(&cell)) return std::isfinite(*d) ? format_double(*d) : "null";
    if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
    return nlohmann::json(std::get<std::string>(cell)).dump();
}

std::string short_number(double x, int digits) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, digits);
    return std::string(buf.data(), res.ptr);
}

std::string pixel(double x) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::fixed, 2);
    return std::string(buf.data(), res.ptr);
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += ch;
        }
    }
    return out;
}

std::pair<double, double> padded_range(double lo, double hi) {
    if (!(lo <= hi)) return {-1.0, 1.0};
    if (hi - lo < 1e-12 * std::max(1.0, std::abs(lo))) {
        const double pad = std::max(0.5, 0.1 * std::abs(lo));
        return {lo - pad, hi + pad};
    }
    const double pad = 0.02 * (hi - lo);
    return {lo - pad, hi + pad};
}

// Equivalent invocation, echoed in the manifest.
std::string command_line(const ExperimentConfig& c) {
    std::string line = "nhdqpt";
    const std::string text = render(c);
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto end = text.find('\n', pos);
        const std::string entry = text.substr(pos, end - pos);
        pos = end + 1;
        const auto eq = entry.find('=');
        const std::string key = entry.substr(0, eq), value = entry.substr(eq + 1);
        line += key == "command" ? " " + value : " --" + key + " " + value;
    }
    return line;
}

}  // namespace

std::string_view to_string(Command c) {
    for (const auto& [value, name] : kCommands) {
        if (value == c) return name;
    }
    return "unknown";
}

std::string_view to_string(Format f) {
    for (const auto& [value, name] : kFormats) {
        if (value == f) return name;
    }
    return "unknown";
}

void ExperimentConfig::validate() const {
    if (kpoints < 16) throw ValidationError("kpoints must be >= 16, got " + std::to_string(kpoints));
    if (tpoints < 16) throw ValidationError("tpoints must be >= 16, got " + std::to_string(tpoints));
    if (!(t_max > 0.0) || !std::isfinite(t_max)) throw ValidationError("tmax must be > 0, got " + format_double(t_max));
    if (branch < 0) throw ValidationError("branch must be >= 0, got " + std::to_string(branch));
    for (double v : {initial.q, initial.eta, final.q, final.eta}) {
        if (!std::isfinite(v)) throw ValidationError("model parameters must be finite");
    }
    if (out.empty()) throw ValidationError("output path must not be empty");
    const auto parent = std::filesystem::path(out).parent_path();
    if (!parent.empty() && !std::filesystem::is_directory(parent)) {
        throw ValidationError("output directory '" + parent.string() + "' does not exist");
    }
}

ExperimentConfig parse_config(const std::vector<std::string>& args) {
    if (args.empty()) throw ParseError("empty input: expected a command");

    CLI::App app{"Non-Hermitian SSH quench dynamics: phase diagrams, spectra, rate functions, Fisher zeros, winding numbers"};
    app.name("nhdqpt");
    std::string command;
    std::string config_path;
    std::map<std::string, std::string> flags;
    app.add_option("command", command, "phase-diagram | spectrum | quench | fisher-zeros | winding | critical");
    app.add_option("--config", config_path, "key=value file or run manifest; flags override it");
    const std::array<std::pair<std::string_view, std::string_view>, 10> described{{
        {"q", "initial q = J2/J1 (default 0.5)"},
        {"eta", "initial gain/loss eta (default 0.4)"},
        {"qf", "final q (default 2)"},
        {"etaf", "final eta (default 0.4)"},
        {"kpoints", "momentum samples M (default 2000)"},
        {"tpoints", "time steps T (default 2000)"},
        {"tmax", "final time (default 10)"},
        {"branch", "Fisher-zero branch l (default 0)"},
        {"out", "output path stem (default nhdqpt_out)"},
        {"format", "csv | json | svg (default csv)"},
    }};
    for (const auto& [key, help] : described) {
        app.add_option("--" + std::string(key), flags[std::string(key)], std::string(help));
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested{app.help()};
    } catch (const CLI::ParseError& e) {
        throw ParseError(e.what());
    }

    RawConfig raw;
    if (!config_path.empty()) raw = text_to_raw(read_file(config_path));
    if (app.count("command") > 0) raw["command"] = command;
    for (const auto& [key, help] : described) {
        if (app.count("--" + std::string(key)) > 0) raw[std::string(key)] = flags[std::string(key)];
    }
    return resolve(raw);
}

ExperimentConfig parse_config_text(std::string_view text) { return resolve(text_to_raw(text)); }

std::string render(const ExperimentConfig& c) {
    std::string s;
    s += "command=" + std::string(to_string(c.command)) + "\n";
    s += "q=" + format_double(c.initial.q) + "\n";
    s += "eta=" + format_double(c.initial.eta) + "\n";
    s += "qf=" + format_double(c.final.q) + "\n";
    s += "etaf=" + format_double(c.final.eta) + "\n";
    s += "kpoints=" + std::to_string(c.kpoints) + "\n";
    s += "tpoints=" + std::to_string(c.tpoints) + "\n";
    s += "tmax=" + format_double(c.t_max) + "\n";
    s += "branch=" + std::to_string(c.branch) + "\n";
    s += "out=" + c.out + "\n";
    s += "format=" + std::string(to_string(c.format)) + "\n";
    return s;
}

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (x == 0.0) return "0";
    return short_number(x, 17);
}

std::string sha256_hex(std::string_view bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw Error("SHA-256 digest failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) {
        hex += kHex[md[i] >> 4];
        hex += kHex[md[i] & 0xf];
    }
    return hex;
}

Result compute(const ExperimentConfig& c) {
    c.validate();
    switch (c.command) {
        case Command::PhaseDiagram: return phase_diagram(c);
        case Command::Spectrum: return spectrum(c);
        case Command::Quench: return quench(c);
        case Command::FisherZeros: return fisher(c);
        case Command::Winding: return winding(c);
        case Command::Critical: return critical(c);
    }
    throw Error("unhandled command");
}

std::string to_csv(const Table& table) {
    std::string s;
    for (std::size_t i = 0; i < table.columns.size(); ++i) s += (i ? "," : "") + table.columns[i];
    s += "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + cell_text(row[i]);
        s += "\n";
    }
    return s;
}

std::string to_json(const Table& table, Command command) {
    std::string s = "{\n\"command\": \"" + std::string(to_string(command)) + "\",\n\"columns\": [";
    for (std::size_t i = 0; i < table.columns.size(); ++i) s += (i ? ", " : "") + nlohmann::json(table.columns[i]).dump();
    s += "],\n\"rows\": [";
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        s += r ? ",\n[" : "\n[";
        for (std::size_t i = 0; i < table.rows[r].size(); ++i) s += (i ? ", " : "") + json_cell(table.rows[r][i]);
        s += "]";
    }
    s += "\n]\n}\n";
    return s;
}

std::string to_svg(const Plot& plot) {
    constexpr double kW = 720, kH = 480, kLeft = 80, kRight = 160, kTop = 40, kBottom = 50;
    constexpr std::array<std::string_view, 6> kColors{"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};
    double xlo = INFINITY, xhi = -INFINITY, ylo = INFINITY, yhi = -INFINITY;
    for (const auto& s : plot.series) {
        for (std::size_t i = 0; i < s.xs.size(); ++i) {
            if (!std::isfinite(s.xs[i]) || !std::isfinite(s.ys[i])) continue;
            xlo = std::min(xlo, s.xs[i]);
            xhi = std::max(xhi, s.xs[i]);
            ylo = std::min(ylo, s.ys[i]);
            yhi = std::max(yhi, s.ys[i]);
        }
    }
    std::tie(xlo, xhi) = padded_range(xlo, xhi);
    std::tie(ylo, yhi) = padded_range(ylo, yhi);
    const double pw = kW - kLeft - kRight, ph = kH - kTop - kBottom;
    const auto px = [&](double x) { return kLeft + (x - xlo) / (xhi - xlo) * pw; };
    const auto py = [&](double y) { return kTop + (yhi - y) / (yhi - ylo) * ph; };

    std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + pixel(kW) + "\" height=\"" + pixel(kH) + "\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"" + pixel(kW) + "\" height=\"" + pixel(kH) + "\" fill=\"white\"/>\n";
    s += "<text x=\"" + pixel(kLeft) + "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">" + escape_xml(plot.title) + "</text>\n";
    s += "<rect x=\"" + pixel(kLeft) + "\" y=\"" + pixel(kTop) + "\" width=\"" + pixel(pw) + "\" height=\"" + pixel(ph) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double xv = xlo + (xhi - xlo) * i / 5.0;
        const double yv = ylo + (yhi - ylo) * i / 5.0;
        const std::string xp = pixel(px(xv)), yp = pixel(py(yv));
        s += "<line x1=\"" + xp + "\" y1=\"" + pixel(kTop + ph) + "\" x2=\"" + xp + "\" y2=\"" + pixel(kTop + ph + 5) + "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + xp + "\" y=\"" + pixel(kTop + ph + 18) + "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" +
             short_number(xv, 4) + "</text>\n";
        s += "<line x1=\"" + pixel(kLeft - 5) + "\" y1=\"" + yp + "\" x2=\"" + pixel(kLeft) + "\" y2=\"" + yp + "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + pixel(kLeft - 8) + "\" y=\"" + yp + "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" +
             short_number(yv, 4) + "</text>\n";
    }
    s += "<text x=\"" + pixel(kLeft + pw / 2) + "\" y=\"" + pixel(kH - 10) +
         "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">" + escape_xml(plot.x_label) + "</text>\n";
    s += "<text x=\"16\" y=\"" + pixel(kTop + ph / 2) + "\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 16 " +
         pixel(kTop + ph / 2) + ")\" text-anchor=\"middle\">" + escape_xml(plot.y_label) + "</text>\n";

    for (std::size_t n = 0; n < plot.series.size(); ++n) {
        const auto& ser = plot.series[n];
        const std::string color(kColors[n % kColors.size()]);
        if (ser.markers) {
            for (std::size_t i = 0; i < ser.xs.size(); ++i) {
                if (!std::isfinite(ser.xs[i]) || !std::isfinite(ser.ys[i])) continue;
                s += "<circle cx=\"" + pixel(px(ser.xs[i])) + "\" cy=\"" + pixel(py(ser.ys[i])) + "\" r=\"1.5\" fill=\"" + color + "\"/>\n";
            }
        } else {
            std::string points;
            const auto flush = [&] {
                if (!points.empty()) s += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.2\" points=\"" + points + "\"/>\n";
                points.clear();
            };
            for (std::size_t i = 0; i < ser.xs.size(); ++i) {
                if (!std::isfinite(ser.xs[i]) || !std::isfinite(ser.ys[i])) {
                    flush();
                    continue;
                }
                points += (points.empty() ? "" : " ") + pixel(px(ser.xs[i])) + "," + pixel(py(ser.ys[i]));
            }
            flush();
        }
        const std::string ly = pixel(kTop + 14 + 18 * static_cast<double>(n));
        s += "<rect x=\"" + pixel(kW - kRight + 12) + "\" y=\"" + pixel(kTop + 5 + 18 * static_cast<double>(n)) +
             "\" width=\"10\" height=\"10\" fill=\"" + color + "\"/>\n";
        s += "<text x=\"" + pixel(kW - kRight + 28) + "\" y=\"" + ly + "\" font-family=\"sans-serif\" font-size=\"12\">" +
             escape_xml(ser.name) + "</text>\n";
    }
    s += "</svg>\n";
    return s;
}

std::string manifest_json(const ResultManifest& m) {
    nlohmann::ordered_json config;
    config["command"] = std::string(to_string(m.config.command));
    config["q"] = m.config.initial.q;
    config["eta"] = m.config.initial.eta;
    config["qf"] = m.config.final.q;
    config["etaf"] = m.config.final.eta;
    config["kpoints"] = m.config.kpoints;
    config["tpoints"] = m.config.tpoints;
    config["tmax"] = m.config.t_max;
    config["branch"] = m.config.branch;
    config["out"] = m.config.out;
    config["format"] = std::string(to_string(m.config.format));

    nlohmann::ordered_json doc;
    doc["command"] = m.command;
    doc["config"] = std::move(config);
    doc["version"] = m.version;
    doc["wall_seconds"] = m.wall_seconds;
    doc["files"] = nlohmann::ordered_json::array();
    for (const auto& f : m.files) doc["files"].push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
    return doc.dump(2) + "\n";
}

ResultManifest run(const ExperimentConfig& config) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    const Result result = compute(config);

    std::string bytes;
    switch (config.format) {
        case Format::Csv: bytes = to_csv(result.table); break;
        case Format::Json: bytes = to_json(result.table, config.command); break;
        case Format::Svg: bytes = to_svg(result.plot); break;
    }
    const std::string path = config.out + "." + std::string(to_string(config.format));
    write_file(path, bytes);

    ResultManifest m;
    m.command = command_line(config);
    m.config = config;
    m.files.push_back({path, sha256_hex(bytes), bytes.size()});
    m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_file(config.out + ".manifest.json", manifest_json(m));
    return m;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        const ExperimentConfig config = parse_config(args);
        const ResultManifest m = run(config);
        out << config.out << ".manifest.json\n";
        return 0;
    } catch (const HelpRequested& help) {
        out << help.text;
        return 0;
    } catch (const std::exception& e) {
        std::string msg = e.what();
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        err << "error: " << msg << "\n";
        return 1;
    }
}

}  // namespace nhdqpt::cli
