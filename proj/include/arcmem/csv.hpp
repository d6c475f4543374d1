#pragma once

#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace arcmem::csv {

/// Shortest decimal text that parses back to exactly `x`.
std::string format_double(double x);

/// RFC-4180 field quoting.
std::string escape(std::string_view field);

class Table {
public:
    explicit Table(std::vector<std::string> header);

    void add_row(std::vector<std::string> row);

    [[nodiscard]] std::string str() const;

    /// Throws Error(io_error) on failure.
    void write(const std::filesystem::path& path) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// Splits one CSV record (no embedded newlines); used by tests and tooling.
std::vector<std::string> split_record(std::string_view line);

}  // namespace arcmem::csv
