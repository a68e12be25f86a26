#include "csv.hpp"

#include "drm/error.hpp"
#include "drm/harness.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <span>

namespace drm::harness {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace csv {

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const auto next = line.find(sep, pos);
        if (next == std::string_view::npos) {
            out.push_back(line.substr(pos));
            return out;
        }
        out.push_back(line.substr(pos, next - pos));
        pos = next + 1;
    }
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

}  // namespace

double parse_number(std::string_view text, const std::string& where) {
    text = trim(text);
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size() || !std::isfinite(v))
        throw Error(ErrorKind::format, where + ": '" + std::string(text) + "' is not a finite number");
    return v;
}

long long parse_integer(std::string_view text, const std::string& where) {
    text = trim(text);
    long long v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw Error(ErrorKind::format, where + ": '" + std::string(text) + "' is not an integer");
    return v;
}

Table Table::read(const std::filesystem::path& path, std::span<const std::string_view> required) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io, "cannot read " + path.string());
    Table t;
    t.name_ = path.filename().string();
    std::string line;
    int line_no = 0;
    bool have_header = false;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto trimmed = trim(line);
        if (trimmed.empty()) continue;
        const auto fields = split(trimmed, ',');
        const std::string where = t.name_ + ":" + std::to_string(line_no);
        if (!have_header) {
            for (std::size_t i = 0; i < fields.size(); ++i) {
                const std::string col(trim(fields[i]));
                if (!t.columns_.emplace(col, i).second)
                    throw Error(ErrorKind::format, where + ": duplicate column '" + col + "'");
            }
            for (auto col : required)
                if (!t.columns_.contains(col))
                    throw Error(ErrorKind::format, where + ": missing column '" + std::string(col) + "'");
            width = fields.size();
            have_header = true;
            continue;
        }
        if (fields.size() != width)
            throw Error(ErrorKind::format, where + ": expected " + std::to_string(width) + " fields, found " +
                                               std::to_string(fields.size()));
        std::vector<std::string> row;
        for (auto f : fields) row.emplace_back(trim(f));
        t.rows_.push_back(std::move(row));
        t.lines_.push_back(line_no);
    }
    if (!have_header) throw Error(ErrorKind::format, t.name_ + ":1: missing header");
    return t;
}

const std::string& Table::Row::text(std::string_view column) const {
    const auto it = table->columns_.find(column);
    if (it == table->columns_.end()) fail("missing column '" + std::string(column) + "'");
    return table->rows_[index][it->second];
}

double Table::Row::number(std::string_view column) const {
    return parse_number(text(column), table->name_ + ":" + std::to_string(line) + " column " + std::string(column));
}

long long Table::Row::integer(std::string_view column) const {
    return parse_integer(text(column), table->name_ + ":" + std::to_string(line) + " column " + std::string(column));
}

void Table::Row::fail(const std::string& message) const {
    throw Error(ErrorKind::format, table->name_ + ":" + std::to_string(line) + ": " + message);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
    out << content;
    if (!out) throw Error(ErrorKind::io, "write failed for " + path.string());
}

}  // namespace csv
}  // namespace drm::harness
