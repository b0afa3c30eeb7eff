#include "proxcor/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "proxcor/errors.hpp"

namespace proxcor::io {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

[[noreturn]] void parse_error(const std::filesystem::path& path, std::size_t line, const std::string& what) {
    std::ostringstream msg;
    msg << path.string() << ":" << line << ": " << what;
    throw Error(ErrorKind::ParseError, msg.str());
}

double parse_double(const std::filesystem::path& path, std::size_t line, const std::string& text) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) parse_error(path, line, "not a number: '" + text + "'");
    return value;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path.string());
    return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::ParseError, "cannot write " + path.string());
    return out;
}

// Reads non-blank lines, returning (line number, text).
std::vector<std::pair<std::size_t, std::string>> read_lines(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::vector<std::pair<std::size_t, std::string>> lines;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (!trim(line).empty()) lines.emplace_back(number, line);
    }
    return lines;
}

} // namespace

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::vector<double> read_vector_csv(const std::filesystem::path& path) {
    const auto lines = read_lines(path);
    if (lines.empty() || trim(lines.front().second) != "value") parse_error(path, 1, "expected header 'value'");
    std::vector<double> values;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = split(lines[i].second);
        if (fields.size() != 1) parse_error(path, lines[i].first, "expected exactly one column");
        values.push_back(parse_double(path, lines[i].first, fields[0]));
    }
    return values;
}

void write_vector_csv(const std::filesystem::path& path, const std::vector<double>& values) {
    auto out = open_out(path);
    out << "value\n";
    for (double v : values) out << format_double(v) << '\n';
}

EnsembleTable read_ensemble_csv(const std::filesystem::path& path) {
    const auto lines = read_lines(path);
    if (lines.empty()) parse_error(path, 1, "empty ensemble file");
    auto header = split(lines.front().second);
    if (header.empty() || header.front() != "subject") parse_error(path, lines.front().first, "expected header 'subject,<id>,...'");
    EnsembleTable table;
    table.ids.assign(header.begin() + 1, header.end());
    if (table.ids.empty()) parse_error(path, lines.front().first, "no detector columns");
    std::set<std::string> seen;
    for (const auto& id : table.ids) {
        if (id.empty()) parse_error(path, lines.front().first, "empty detector id");
        if (!seen.insert(id).second) parse_error(path, lines.front().first, "duplicate detector id '" + id + "'");
    }
    table.columns.assign(table.ids.size(), {});
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = split(lines[i].second);
        if (fields.size() != header.size()) parse_error(path, lines[i].first, "row has the wrong number of columns");
        table.subjects.push_back(fields[0]);
        for (std::size_t d = 0; d < table.ids.size(); ++d) {
            table.columns[d].push_back(parse_double(path, lines[i].first, fields[d + 1]));
        }
    }
    return table;
}

void write_ensemble_csv(const std::filesystem::path& path, const EnsembleTable& table) {
    auto out = open_out(path);
    out << "subject";
    for (const auto& id : table.ids) out << ',' << id;
    out << '\n';
    const std::size_t rows = table.columns.empty() ? 0 : table.columns.front().size();
    for (std::size_t s = 0; s < rows; ++s) {
        out << (s < table.subjects.size() ? table.subjects[s] : std::to_string(s + 1));
        for (const auto& col : table.columns) out << ',' << format_double(col[s]);
        out << '\n';
    }
}

std::map<std::string, std::string> read_tags_csv(const std::filesystem::path& path) {
    const auto lines = read_lines(path);
    if (lines.empty() || split(lines.front().second) != std::vector<std::string>{"id", "tag"}) {
        parse_error(path, 1, "expected header 'id,tag'");
    }
    std::map<std::string, std::string> tags;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = split(lines[i].second);
        if (fields.size() != 2) parse_error(path, lines[i].first, "expected two columns");
        if (!tags.emplace(fields[0], fields[1]).second) parse_error(path, lines[i].first, "duplicate id '" + fields[0] + "'");
    }
    return tags;
}

void write_tags_csv(const std::filesystem::path& path, const std::vector<std::pair<std::string, std::string>>& tags) {
    auto out = open_out(path);
    out << "id,tag\n";
    for (const auto& [id, tag] : tags) out << id << ',' << tag << '\n';
}

void write_curve_csv(const std::filesystem::path& path, const std::vector<CurvePoint>& curve) {
    auto out = open_out(path);
    out << "n,probability\n";
    for (const auto& p : curve) out << p.n << ',' << format_double(p.probability) << '\n';
}

void write_disc_csv(const std::filesystem::path& path, const std::vector<EnsembleRecord>& records,
                    const DiscProjection& disc) {
    auto out = open_out(path);
    out << "id,tag,p1,p2\n";
    for (std::size_t j = 0; j < records.size(); ++j) {
        out << records[j].id << ',' << records[j].tag << ',' << format_double(disc.points[j].first) << ','
            << format_double(disc.points[j].second) << '\n';
    }
}

EnsembleTable to_table(const std::vector<EnsembleRecord>& records) {
    EnsembleTable table;
    for (const auto& r : records) {
        table.ids.push_back(r.id);
        table.columns.emplace_back(r.vector.values().begin(), r.vector.values().end());
    }
    const std::size_t n = records.empty() ? 0 : records.front().vector.size();
    for (std::size_t s = 0; s < n; ++s) table.subjects.push_back(std::to_string(s + 1));
    return table;
}

} // namespace proxcor::io
