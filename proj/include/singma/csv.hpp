#pragma once

#include <string>
#include <vector>

namespace singma {

/// Header plus rows of already formatted fields.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row);
    /// Column index by name; throws std::out_of_range.
    int column(const std::string& name) const;
};

/// %.15g, with "inf", "-inf" and "nan" for non-finite values.
std::string csv_number(double v);
std::string csv_bool(bool v);

/// Quote fields containing commas, quotes or line breaks; LF line endings.
std::string to_csv(const CsvTable& table);
CsvTable parse_csv(const std::string& text);

/// Throws std::runtime_error on I/O failure.
void write_csv(const CsvTable& table, const std::string& path);
CsvTable read_csv(const std::string& path);

}  // namespace singma
