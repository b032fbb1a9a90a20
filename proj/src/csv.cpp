#include "evospec/csv.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "evospec/errors.hpp"

namespace evospec {

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {
    if (columns_.empty()) throw InvalidArgument("CSV needs at least one column");
}

CsvTable& CsvTable::row() {
    if (!rows_.empty() && rows_.back().size() != columns_.size())
        throw InvariantViolation("CSV row has " + std::to_string(rows_.back().size()) + " fields, expected " +
                                 std::to_string(columns_.size()));
    rows_.emplace_back();
    return *this;
}

CsvTable& CsvTable::operator<<(const std::string& v) {
    if (rows_.empty()) throw InvariantViolation("CSV field written before row()");
    if (v.find_first_of(",\"\n") != std::string::npos) throw InvalidArgument("CSV field needs quoting: " + v);
    rows_.back().push_back(v);
    return *this;
}

CsvTable& CsvTable::operator<<(double v) { return *this << format_double(v); }
CsvTable& CsvTable::operator<<(int v) { return *this << std::to_string(v); }
CsvTable& CsvTable::operator<<(long v) { return *this << std::to_string(v); }
CsvTable& CsvTable::operator<<(unsigned long v) { return *this << std::to_string(v); }
CsvTable& CsvTable::operator<<(unsigned long long v) { return *this << std::to_string(v); }

std::string CsvTable::str(const CsvMeta& meta) const {
    if (!rows_.empty() && rows_.back().size() != columns_.size()) throw InvariantViolation("incomplete final CSV row");
    std::ostringstream os;
    os << "# evospec schema=" << kCsvSchema;
    for (const auto& [k, v] : meta) os << ' ' << k << '=' << v;
    os << '\n';
    for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << columns_[i];
    os << '\n';
    for (const auto& r : rows_) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
        os << '\n';
    }
    return os.str();
}

void CsvTable::write(const std::string& path, const CsvMeta& meta) const {
    const std::string text = str(meta);
    namespace fs = std::filesystem;
    std::error_code ec;
    const fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path(), ec);
    if (ec) throw ConfigError("cannot create output directory " + p.parent_path().string() + ": " + ec.message());
    const fs::path tmp = p.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw ConfigError("cannot write " + tmp.string());
        out << text;
        if (!out) throw ConfigError("write failed for " + tmp.string());
    }
    fs::rename(tmp, p, ec);
    if (ec) throw ConfigError("cannot move " + tmp.string() + " to " + path + ": " + ec.message());
}

}  // namespace evospec
