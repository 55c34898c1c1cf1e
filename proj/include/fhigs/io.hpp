#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fhigs {

/// Round-trip decimal formatting.
inline std::string format_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Plain CSV table: header row, comma separators, decimal points. Rows are
/// written with full round-trip precision.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void add_row(const std::vector<double>& values) {
        if (values.size() != columns_.size())
            throw std::invalid_argument("CsvWriter: row width mismatch");
        std::string line;
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) line += ',';
            line += format_full(values[i]);
        }
        rows_.push_back(std::move(line));
    }

    void add_row_mixed(const std::vector<std::string>& cells) {
        if (cells.size() != columns_.size())
            throw std::invalid_argument("CsvWriter: row width mismatch");
        std::string line;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) line += ',';
            line += cells[i];
        }
        rows_.push_back(std::move(line));
    }

    std::string str() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < columns_.size(); ++i) {
            if (i) os << ',';
            os << columns_[i];
        }
        os << '\n';
        for (const auto& r : rows_) os << r << '\n';
        return os.str();
    }

    void write(const std::filesystem::path& path) const {
        std::ofstream f(path);
        if (!f) throw std::runtime_error("CsvWriter: cannot open " + path.string());
        f << str();
    }

private:
    std::vector<std::string> columns_;
    std::vector<std::string> rows_;
};

}  // namespace fhigs
