#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace crossing::cli {

/// Shortest text that reads back to the same double; "" for NaN.
std::string format_number(double x);

/// Header plus rows of preformatted cells. Columns ending in _diag carry diagnostics.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> columns);

    const std::vector<std::string>& columns() const { return columns_; }
    std::size_t size() const { return rows_.size(); }
    const std::vector<std::string>& row(std::size_t i) const { return rows_.at(i); }

    /// Index of a column; throws std::out_of_range for unknown names.
    std::size_t column(const std::string& name) const;

    /// Empty row to fill with set().
    std::vector<std::string> blank() const { return std::vector<std::string>(columns_.size()); }
    void set(std::vector<std::string>& row, const std::string& name, const std::string& value) const;
    void set(std::vector<std::string>& row, const std::string& name, double value) const;
    void push(std::vector<std::string> row);

    void write(std::ostream& os) const;
    void write(const std::filesystem::path& path) const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

}  // namespace crossing::cli
