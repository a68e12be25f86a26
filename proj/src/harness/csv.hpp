#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace drm::harness::csv {

/// Comma-separated table addressed by column name. No quoting: fields in
/// bundle files never contain commas.
class Table {
public:
    /// Throws ErrorKind::io if unreadable, ErrorKind::format if malformed.
    static Table read(const std::filesystem::path& path, std::span<const std::string_view> required);

    struct Row {
        const Table* table;
        std::size_t index;
        int line;  // 1-based line in the file

        const std::string& text(std::string_view column) const;
        double number(std::string_view column) const;
        long long integer(std::string_view column) const;
        [[noreturn]] void fail(const std::string& message) const;
    };

    std::size_t size() const { return rows_.size(); }
    Row row(std::size_t i) const { return {this, i, lines_[i]}; }
    const std::string& name() const { return name_; }

private:
    std::string name_;
    std::map<std::string, std::size_t, std::less<>> columns_;
    std::vector<std::vector<std::string>> rows_;
    std::vector<int> lines_;
};

double parse_number(std::string_view text, const std::string& where);
long long parse_integer(std::string_view text, const std::string& where);
std::vector<std::string_view> split(std::string_view line, char sep);
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace drm::harness::csv
