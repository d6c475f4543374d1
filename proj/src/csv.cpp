#include "arcmem/csv.hpp"

#include "arcmem/error.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <stdexcept>

namespace arcmem::csv {

std::string format_double(double x) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    if (res.ec != std::errc{}) throw Error(ErrorCode::internal, "number formatting failed");
    return std::string(buf.data(), res.ptr);
}

std::string escape(std::string_view field) {
    const bool quote = field.find_first_of(",\"\r\n") != std::string_view::npos;
    if (!quote) return std::string(field);
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

Table::Table(std::vector<std::string> header) : header_(std::move(header)) {}

void Table::add_row(std::vector<std::string> row) {
    if (row.size() != header_.size()) {
        throw Error(ErrorCode::internal, "csv row width does not match the header");
    }
    rows_.push_back(std::move(row));
}

std::string Table::str() const {
    std::string out;
    auto emit = [&](const std::vector<std::string>& rec) {
        for (std::size_t j = 0; j < rec.size(); ++j) {
            if (j > 0) out.push_back(',');
            out += escape(rec[j]);
        }
        out.push_back('\n');
    };
    emit(header_);
    for (const auto& r : rows_) emit(r);
    return out;
}

void Table::write(const std::filesystem::path& path) const {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw Error(ErrorCode::io_error, "cannot open " + path.string() + " for writing");
    const std::string text = str();
    os.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!os) throw Error(ErrorCode::io_error, "write failed for " + path.string());
}

std::vector<std::string> split_record(std::string_view line) {
    std::vector<std::string> out;
    std::string cur;
    bool in_quotes = false;
    for (std::size_t j = 0; j < line.size(); ++j) {
        const char c = line[j];
        if (in_quotes) {
            if (c == '"') {
                if (j + 1 < line.size() && line[j + 1] == '"') {
                    cur.push_back('"');
                    ++j;
                } else {
                    in_quotes = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(std::move(cur));
    return out;
}

}  // namespace arcmem::csv
