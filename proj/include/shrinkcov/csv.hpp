#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "shrinkcov/panel.hpp"

namespace shrinkcov {

using CsvRecord = std::vector<std::string>;

/// RFC 4180 style reader: quoted fields may hold the delimiter, doubled
/// quotes and line breaks; CRLF and LF line endings are both accepted. Blank
/// lines are skipped.
inline std::vector<CsvRecord> parse_csv(std::string_view text, char delimiter = ',') {
    std::vector<CsvRecord> records;
    CsvRecord record;
    std::string field;
    bool quoted = false;
    bool field_started = false;

    auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_record = [&] {
        if (field_started || !record.empty() || !field.empty())
            end_field();
        const bool blank = record.size() == 1 && record[0].empty();
        if (!record.empty() && !blank)
            records.push_back(std::move(record));
        record.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(ch);
            }
            continue;
        }
        if (ch == '"') {
            quoted = true;
            field_started = true;
        } else if (ch == delimiter) {
            end_field();
            field_started = true;
        } else if (ch == '\r') {
            if (i + 1 < text.size() && text[i + 1] == '\n')
                ++i;
            end_record();
        } else if (ch == '\n') {
            end_record();
        } else {
            field.push_back(ch);
        }
    }
    if (quoted)
        throw data_error("csv: unterminated quoted field");
    end_record();
    return records;
}

/// Shortest decimal text that reads back to the same double.
inline std::string format_double(double x) {
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

inline std::string csv_escape(const std::string& s, char delimiter = ',') {
    if (s.find_first_of(std::string{delimiter, '"', '\n', '\r'}) == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

enum class InputKind { prices, log_returns };
enum class MissingPolicy { error, drop_row };

struct IngestOptions {
    InputKind input_kind = InputKind::log_returns;
    char delimiter = ',';
    bool header = true;
    MissingPolicy missing_policy = MissingPolicy::error;
    /// Column names (with a header) or 0-based indices (without one).
    std::vector<std::string> column_subset;
};

namespace detail {

inline bool is_missing_token(std::string_view s) {
    return s.empty() || s == "NA" || s == "N/A" || s == "NaN" || s == "nan" || s == "null" ||
           s == "NULL" || s == ".";
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
        s.remove_suffix(1);
    return s;
}

inline std::optional<double> parse_number(std::string_view s) {
    if (!s.empty() && s.front() == '+')
        s.remove_prefix(1);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(v))
        return std::nullopt;
    return v;
}

} // namespace detail

/// Builds a panel from CSV text. Rows are time points in ascending order and
/// columns are assets; there is no orientation detection. In prices mode
/// each column becomes log(P_t / P_{t-1}), giving one row fewer.
inline ReturnsPanel parse_returns_csv(std::string_view text, const IngestOptions& opts = {}) {
    auto records = parse_csv(text, opts.delimiter);
    if (records.empty())
        throw data_error("csv: no data");

    std::vector<std::string> names;
    std::size_t first_data = 0;
    if (opts.header) {
        names = records.front();
        first_data = 1;
    }
    const std::size_t width = records.front().size();
    if (names.empty())
        for (std::size_t j = 0; j < width; ++j)
            names.push_back("c" + std::to_string(j + 1));

    std::vector<std::size_t> columns;
    if (opts.column_subset.empty()) {
        for (std::size_t j = 0; j < width; ++j)
            columns.push_back(j);
    } else {
        for (const auto& key : opts.column_subset) {
            std::optional<std::size_t> found;
            if (opts.header) {
                for (std::size_t j = 0; j < names.size(); ++j)
                    if (names[j] == key)
                        found = j;
            } else {
                std::size_t idx = 0;
                const auto res = std::from_chars(key.data(), key.data() + key.size(), idx);
                if (res.ec == std::errc{} && res.ptr == key.data() + key.size() && idx < width)
                    found = idx;
            }
            if (!found)
                throw config_error("csv: unknown column '" + key + "'");
            columns.push_back(*found);
        }
    }

    std::vector<std::vector<double>> rows;
    for (std::size_t r = first_data; r < records.size(); ++r) {
        const auto& rec = records[r];
        const std::size_t row_no = r + 1;
        if (rec.size() != width)
            throw data_error("csv: row " + std::to_string(row_no) + " has " +
                             std::to_string(rec.size()) + " fields, expected " +
                             std::to_string(width));
        std::vector<double> values;
        values.reserve(columns.size());
        bool drop = false;
        for (std::size_t j : columns) {
            const auto cell = detail::trim(rec[j]);
            if (detail::is_missing_token(cell)) {
                if (opts.missing_policy == MissingPolicy::drop_row) {
                    drop = true;
                    break;
                }
                throw data_error("csv: missing value at row " + std::to_string(row_no) +
                                 ", column '" + names[j] + "'");
            }
            const auto v = detail::parse_number(cell);
            if (!v)
                throw data_error("csv: non-numeric value '" + std::string(cell) + "' at row " +
                                 std::to_string(row_no) + ", column '" + names[j] + "'");
            if (opts.input_kind == InputKind::prices && !(*v > 0.0))
                throw data_error("csv: nonpositive price at row " + std::to_string(row_no) +
                                 ", column '" + names[j] + "'");
            values.push_back(*v);
        }
        if (!drop)
            rows.push_back(std::move(values));
    }

    std::vector<std::string> labels;
    for (std::size_t j : columns)
        labels.push_back(names[j]);

    const auto d = static_cast<Eigen::Index>(columns.size());
    if (opts.input_kind == InputKind::prices) {
        if (rows.size() < 2)
            throw data_error("csv: prices mode needs at least two rows");
        Matrix out(static_cast<Eigen::Index>(rows.size() - 1), d);
        for (std::size_t t = 1; t < rows.size(); ++t)
            for (Eigen::Index j = 0; j < d; ++j)
                out(static_cast<Eigen::Index>(t - 1), j) =
                    std::log(rows[t][static_cast<std::size_t>(j)] /
                             rows[t - 1][static_cast<std::size_t>(j)]);
        return ReturnsPanel(std::move(out), std::move(labels));
    }
    Matrix out(static_cast<Eigen::Index>(rows.size()), d);
    for (std::size_t t = 0; t < rows.size(); ++t)
        for (Eigen::Index j = 0; j < d; ++j)
            out(static_cast<Eigen::Index>(t), j) = rows[t][static_cast<std::size_t>(j)];
    return ReturnsPanel(std::move(out), std::move(labels));
}

inline ReturnsPanel load_returns_csv(const std::string& path, const IngestOptions& opts = {}) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw data_error("csv: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_returns_csv(buf.str(), opts);
}

/// Writes a panel with a header row (labels, or c1..cd).
inline std::string panel_to_csv(const ReturnsPanel& panel) {
    std::string out;
    for (std::size_t j = 0; j < panel.cols(); ++j) {
        if (j)
            out += ',';
        out += panel.labels().empty() ? "c" + std::to_string(j + 1)
                                      : csv_escape(panel.labels()[j]);
    }
    out += '\n';
    for (std::size_t i = 0; i < panel.rows(); ++i) {
        for (std::size_t j = 0; j < panel.cols(); ++j) {
            if (j)
                out += ',';
            out += format_double(panel(i, j));
        }
        out += '\n';
    }
    return out;
}

} // namespace shrinkcov
