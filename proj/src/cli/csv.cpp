#include "crossing/cli/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace crossing::cli {

std::string format_number(double x) {
    if (std::isnan(x)) return "";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

namespace {

std::string quoted(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + '"';
}

}  // namespace

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

std::size_t CsvTable::column(const std::string& name) const {
    const auto it = std::find(columns_.begin(), columns_.end(), name);
    if (it == columns_.end()) throw std::out_of_range("no column " + name);
    return static_cast<std::size_t>(it - columns_.begin());
}

void CsvTable::set(std::vector<std::string>& row, const std::string& name, const std::string& value) const {
    row.at(column(name)) = value;
}

void CsvTable::set(std::vector<std::string>& row, const std::string& name, double value) const {
    set(row, name, format_number(value));
}

void CsvTable::push(std::vector<std::string> row) {
    if (row.size() != columns_.size()) throw std::invalid_argument("csv row width mismatch");
    rows_.push_back(std::move(row));
}

void CsvTable::write(std::ostream& os) const {
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << quoted(cells[i]);
        os << '\n';
    };
    line(columns_);
    for (const auto& r : rows_) line(r);
}

void CsvTable::write(const std::filesystem::path& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    write(f);
}

}  // namespace crossing::cli
