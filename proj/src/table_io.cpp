#include "kpls/dataset.hpp"
#include "kpls/detail/numfmt.hpp"
#include "kpls/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace kpls {

namespace {

std::vector<std::string> split_fields(const std::string& line, char delimiter) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, delimiter)) fields.push_back(field);
    if (!line.empty() && line.back() == delimiter) fields.emplace_back();
    return fields;
}

std::string trim(const std::string& s) {
    size_t begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    size_t end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_cell(const std::string& raw, size_t row, size_t col) {
    const std::string cell = trim(raw);
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw data_error("non-numeric value '" + cell + "' at row " + std::to_string(row) +
                         ", column " + std::to_string(col));
    if (!std::isfinite(value))
        throw data_error("non-finite value '" + cell + "' at row " + std::to_string(row) +
                         ", column " + std::to_string(col));
    return value;
}

} // namespace

Dataset load_table(const std::string& path, ResponseColumn mode) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open '" + path + "'");

    std::string header;
    if (!std::getline(in, header)) throw data_error("empty file '" + path + "'");

    const char delimiter = header.find('\t') != std::string::npos ? '\t' : ',';
    std::vector<std::string> header_fields = split_fields(header, delimiter);
    for (auto& f : header_fields) f = trim(f);
    if (header_fields.size() < 2)
        throw data_error("header of '" + path + "' has " + std::to_string(header_fields.size()) +
                         " fields; need a sample-id column and at least one value column");

    bool has_response = false;
    switch (mode) {
        case ResponseColumn::absent:
            break;
        case ResponseColumn::required:
            if (header_fields.back() != "response")
                throw data_error("last column of '" + path + "' is '" + header_fields.back() +
                                 "', expected 'response'");
            has_response = true;
            break;
        case ResponseColumn::auto_detect:
            has_response = header_fields.back() == "response";
            break;
    }

    const size_t field_count = header_fields.size();
    const size_t feature_count = field_count - 1 - (has_response ? 1 : 0);

    Dataset data;
    data.feature_names.assign(header_fields.begin() + 1,
                              header_fields.begin() + 1 + static_cast<long>(feature_count));

    std::vector<std::vector<double>> rows;
    std::vector<double> responses;
    std::string line;
    size_t line_number = 1;
    while (std::getline(in, line)) {
        ++line_number;
        if (trim(line).empty()) continue;
        std::vector<std::string> fields = split_fields(line, delimiter);
        if (fields.size() != field_count)
            throw data_error("row " + std::to_string(line_number) + " of '" + path + "' has " +
                             std::to_string(fields.size()) + " fields, expected " +
                             std::to_string(field_count));
        const std::string id = trim(fields[0]);
        if (id.empty())
            throw data_error("empty sample id at row " + std::to_string(line_number) + " of '" +
                             path + "'");
        data.sample_ids.push_back(id);

        std::vector<double> row(feature_count);
        for (size_t j = 0; j < feature_count; ++j)
            row[j] = parse_cell(fields[j + 1], line_number, j + 2);
        rows.push_back(std::move(row));
        if (has_response)
            responses.push_back(parse_cell(fields[field_count - 1], line_number, field_count));
    }

    const Index l = static_cast<Index>(rows.size());
    data.features.resize(l, static_cast<Index>(feature_count));
    for (Index i = 0; i < l; ++i)
        for (size_t j = 0; j < feature_count; ++j)
            data.features(i, static_cast<Index>(j)) = rows[static_cast<size_t>(i)][j];
    if (has_response) {
        Vector y(l);
        for (Index i = 0; i < l; ++i) y[i] = responses[static_cast<size_t>(i)];
        data.response = std::move(y);
    }
    data.validate();
    return data;
}

Dataset load_table(const std::string& path, bool has_response) {
    return load_table(path, has_response ? ResponseColumn::required : ResponseColumn::absent);
}

void write_table(const Dataset& data, const std::string& path) {
    data.validate();
    std::ofstream out(path);
    if (!out) throw data_error("cannot write '" + path + "'");

    out << "id";
    for (const auto& name : data.feature_names) out << ',' << name;
    if (data.response) out << ",response";
    out << '\n';

    for (Index i = 0; i < data.sample_count(); ++i) {
        out << data.sample_ids[static_cast<size_t>(i)];
        for (Index j = 0; j < data.feature_count(); ++j)
            out << ',' << detail::format_double(data.features(i, j));
        if (data.response) out << ',' << detail::format_double((*data.response)[i]);
        out << '\n';
    }
    if (!out) throw data_error("failed while writing '" + path + "'");
}

} // namespace kpls
