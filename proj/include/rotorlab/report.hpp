#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "rotorlab/error.hpp"

namespace rotorlab {

using ordered_json = nlohmann::ordered_json;

/// One measured instance. Missing values stay std::nullopt and are written as empty
/// CSV cells / JSON null, never as zero.
struct ReportRow {
    std::string family;
    std::string graph;
    std::uint64_t n = 0;
    std::uint64_t m = 0;
    std::string builder;
    std::uint64_t start = 0;
    std::optional<std::uint64_t> vertex_cover_steps;
    std::optional<std::uint64_t> edge_cover_steps;
    std::optional<std::uint64_t> target_first_visit;
    std::optional<double> mc_vertex_mean;
    std::optional<double> mc_vertex_stderr;
    std::optional<double> mc_edge_mean;
    std::optional<double> mc_edge_stderr;
    std::optional<double> max_K;
    std::optional<double> three_max_K;
    std::optional<double> psi;
    std::optional<double> lambda2;
    std::optional<double> flow_total;
    std::optional<double> fit_slope;
    std::optional<double> fit_r2;
    std::string status = "ok";

    friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct Report {
    ordered_json metadata = ordered_json::object();  ///< the only place timestamps may appear
    std::vector<ReportRow> rows;
    ordered_json summary = ordered_json::object();

    friend bool operator==(const Report& a, const Report& b) {
        return a.metadata == b.metadata && a.rows == b.rows && a.summary == b.summary;
    }
};

enum class Format { csv, json };

inline Format parse_format(const std::string& s) {
    if (s == "csv") return Format::csv;
    if (s == "json") return Format::json;
    throw InvalidParameters("unknown format '" + s + "' (csv|json)");
}

namespace detail {

using Field = std::variant<std::string ReportRow::*, std::uint64_t ReportRow::*, std::optional<std::uint64_t> ReportRow::*,
                           std::optional<double> ReportRow::*>;

struct Column {
    const char* name;
    Field field;
};

inline const std::vector<Column>& columns() {
    static const std::vector<Column> cols{
        {"family", &ReportRow::family},
        {"graph", &ReportRow::graph},
        {"n", &ReportRow::n},
        {"m", &ReportRow::m},
        {"builder", &ReportRow::builder},
        {"start", &ReportRow::start},
        {"vertex_cover_steps", &ReportRow::vertex_cover_steps},
        {"edge_cover_steps", &ReportRow::edge_cover_steps},
        {"target_first_visit", &ReportRow::target_first_visit},
        {"mc_vertex_mean", &ReportRow::mc_vertex_mean},
        {"mc_vertex_stderr", &ReportRow::mc_vertex_stderr},
        {"mc_edge_mean", &ReportRow::mc_edge_mean},
        {"mc_edge_stderr", &ReportRow::mc_edge_stderr},
        {"maxK", &ReportRow::max_K},
        {"3maxK", &ReportRow::three_max_K},
        {"psi", &ReportRow::psi},
        {"lambda2", &ReportRow::lambda2},
        {"flow_total", &ReportRow::flow_total},
        {"fit_slope", &ReportRow::fit_slope},
        {"fit_r2", &ReportRow::fit_r2},
        {"status", &ReportRow::status},
    };
    return cols;
}

inline std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::vector<std::string> csv_split(const std::string& line) {
    std::vector<std::string> cells(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cells.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cells.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            cells.emplace_back();
        } else if (c != '\r') {
            cells.back() += c;
        }
    }
    if (quoted) throw ParseError("csv: unterminated quote");
    return cells;
}

inline std::uint64_t parse_u64(const std::string& s, const char* col) {
    char* end = nullptr;
    const auto v = std::strtoull(s.c_str(), &end, 10);
    if (s.empty() || *end != '\0') throw ParseError(std::string("csv: column ") + col + " expects an integer, got '" + s + "'");
    return v;
}

inline double parse_double(const std::string& s, const char* col) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0') throw ParseError(std::string("csv: column ") + col + " expects a number, got '" + s + "'");
    return v;
}

}  // namespace detail

/// Six significant digits.
inline std::string format6(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

inline double round6(double x) { return std::strtod(format6(x).c_str(), nullptr); }

inline std::vector<std::string> report_columns() {
    std::vector<std::string> out;
    for (const auto& c : detail::columns()) out.emplace_back(c.name);
    return out;
}

inline ordered_json row_to_json(const ReportRow& r) {
    ordered_json j = ordered_json::object();
    for (const auto& c : detail::columns()) {
        std::visit(
            [&](auto ptr) {
                const auto& v = r.*ptr;
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, std::optional<double>>) {
                    j[c.name] = v ? ordered_json(round6(*v)) : ordered_json(nullptr);
                } else if constexpr (std::is_same_v<T, std::optional<std::uint64_t>>) {
                    j[c.name] = v ? ordered_json(*v) : ordered_json(nullptr);
                } else {
                    j[c.name] = v;
                }
            },
            c.field);
    }
    return j;
}

inline ReportRow row_from_json(const ordered_json& j) {
    ReportRow r;
    for (const auto& c : detail::columns()) {
        if (!j.contains(c.name)) throw ParseError(std::string("json row lacks field ") + c.name);
        const auto& x = j.at(c.name);
        std::visit(
            [&](auto ptr) {
                auto& v = r.*ptr;
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, std::optional<double>>) {
                    v = x.is_null() ? std::nullopt : std::optional<double>(x.get<double>());
                } else if constexpr (std::is_same_v<T, std::optional<std::uint64_t>>) {
                    v = x.is_null() ? std::nullopt : std::optional<std::uint64_t>(x.get<std::uint64_t>());
                } else {
                    v = x.get<T>();
                }
            },
            c.field);
    }
    return r;
}

inline ordered_json to_json(const Report& rep) {
    ordered_json j;
    j["metadata"] = rep.metadata;
    j["rows"] = ordered_json::array();
    for (const auto& r : rep.rows) j["rows"].push_back(row_to_json(r));
    j["summary"] = rep.summary;
    return j;
}

inline Report report_from_json(const ordered_json& j) {
    Report rep;
    try {
        rep.metadata = j.at("metadata");
        for (const auto& r : j.at("rows")) rep.rows.push_back(row_from_json(r));
        rep.summary = j.at("summary");
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("report json: ") + e.what());
    }
    return rep;
}

/// CSV: header line then one line per row; metadata and summary are not part of CSV.
inline void write_csv(std::ostream& os, const Report& rep) {
    const auto& cols = detail::columns();
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i].name;
    os << '\n';
    for (const auto& r : rep.rows) {
        for (std::size_t i = 0; i < cols.size(); ++i) {
            if (i) os << ',';
            std::visit(
                [&](auto ptr) {
                    const auto& v = r.*ptr;
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, std::optional<double>>) {
                        if (v) os << format6(*v);
                    } else if constexpr (std::is_same_v<T, std::optional<std::uint64_t>>) {
                        if (v) os << *v;
                    } else if constexpr (std::is_same_v<T, std::string>) {
                        os << detail::csv_quote(v);
                    } else {
                        os << v;
                    }
                },
                cols[i].field);
        }
        os << '\n';
    }
}

inline Report read_csv(std::istream& is) {
    const auto& cols = detail::columns();
    std::string line;
    if (!std::getline(is, line)) throw ParseError("csv: empty input");
    const auto header = detail::csv_split(line);
    if (header != report_columns()) throw ParseError("csv: unexpected header");
    Report rep;
    while (std::getline(is, line)) {
        if (line.empty() || line == "\r") continue;
        const auto cells = detail::csv_split(line);
        if (cells.size() != cols.size()) throw ParseError("csv: row has " + std::to_string(cells.size()) + " cells");
        ReportRow r;
        for (std::size_t i = 0; i < cols.size(); ++i) {
            const std::string& s = cells[i];
            std::visit(
                [&](auto ptr) {
                    auto& v = r.*ptr;
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, std::optional<double>>) {
                        v = s.empty() ? std::nullopt : std::optional<double>(detail::parse_double(s, cols[i].name));
                    } else if constexpr (std::is_same_v<T, std::optional<std::uint64_t>>) {
                        v = s.empty() ? std::nullopt : std::optional<std::uint64_t>(detail::parse_u64(s, cols[i].name));
                    } else if constexpr (std::is_same_v<T, std::string>) {
                        v = s;
                    } else {
                        v = detail::parse_u64(s, cols[i].name);
                    }
                },
                cols[i].field);
        }
        rep.rows.push_back(std::move(r));
    }
    return rep;
}

inline std::string to_csv(const Report& rep) {
    std::ostringstream os;
    write_csv(os, rep);
    return os.str();
}

inline std::string to_json_text(const Report& rep) { return to_json(rep).dump(2) + "\n"; }

/// Writes the report; throws IoError naming the path.
inline void emit(const Report& rep, Format fmt, const std::string& path) {
    if (rep.rows.empty()) throw InvalidParameters("refusing to emit an empty report");
    std::ofstream out(path);
    if (!out) throw IoError("cannot open output file " + path);
    if (fmt == Format::csv) {
        write_csv(out, rep);
    } else {
        out << to_json_text(rep);
    }
    if (!out) throw IoError("write failed for " + path);
}

inline Report load_report(const std::string& path, Format fmt) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open report " + path);
    if (fmt == Format::csv) return read_csv(in);
    try {
        return report_from_json(ordered_json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("report json: ") + e.what());
    }
}

}  // namespace rotorlab
