#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace evospec {

constexpr int kCsvSchema = 1;

std::uint64_t fnv1a(const std::string& text);
std::string hex64(std::uint64_t v);

// Ordered key=value pairs for the leading comment line.
using CsvMeta = std::vector<std::pair<std::string, std::string>>;

// Small in-memory table; the file starts with
// "# evospec schema=1 k=v ..." followed by the header row.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> columns);

    CsvTable& row();
    CsvTable& operator<<(double v);
    CsvTable& operator<<(int v);
    CsvTable& operator<<(long v);
    CsvTable& operator<<(unsigned long v);
    CsvTable& operator<<(unsigned long long v);
    CsvTable& operator<<(const std::string& v);
    CsvTable& operator<<(const char* v) { return *this << std::string(v); }

    const std::vector<std::string>& columns() const { return columns_; }
    std::size_t num_rows() const { return rows_.size(); }

    std::string str(const CsvMeta& meta) const;
    // Writes atomically via a temporary file; creates parent directories.
    void write(const std::string& path, const CsvMeta& meta) const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

std::string format_double(double v);

}  // namespace evospec
