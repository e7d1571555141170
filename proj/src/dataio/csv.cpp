#include "dataio/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>

#include "core/error.hpp"

namespace topsim {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw IoError("cannot read " + path);
    return buffer.str();
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

/// Splits the file into lines, dropping a '\r' suffix and the trailing empty
/// line produced by a final newline.
std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        if (end == text.size()) break;
        start = end + 1;
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    return lines;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            break;
        }
        fields.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return fields;
}

double parse_double(std::string_view field, std::size_t line_no, std::size_t col_no) {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || field.empty()) {
        std::ostringstream os;
        os << "non-numeric field at line " << line_no << ", column " << col_no;
        throw ParseError(os.str());
    }
    if (!std::isfinite(value)) {
        std::ostringstream os;
        os << "non-finite value at line " << line_no << ", column " << col_no;
        throw ParseError(os.str());
    }
    return value;
}

void append_double(std::string& out, double value) {
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    out.append(buffer, ptr);
    (void)ec;
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << contents;
    if (!out) throw IoError("cannot write " + path);
}

}  // namespace

std::vector<FeatureVector> load_features_csv(const std::string& path) {
    const std::string text = read_file(path);
    const std::vector<std::string_view> lines = split_lines(text);
    if (lines.empty()) throw ParseError("empty feature file: " + path);

    std::vector<FeatureVector> rows;
    rows.reserve(lines.size());
    std::size_t dim = 0;
    for (std::size_t l = 0; l < lines.size(); ++l) {
        const std::size_t line_no = l + 1;
        const std::vector<std::string_view> fields = split_fields(lines[l]);
        if (l == 0) {
            dim = fields.size();
        } else if (fields.size() != dim) {
            std::ostringstream os;
            os << "inconsistent dimension at line " << line_no;
            throw ParseError(os.str());
        }
        FeatureVector row;
        row.reserve(fields.size());
        for (std::size_t f = 0; f < fields.size(); ++f) {
            row.push_back(parse_double(fields[f], line_no, f + 1));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void save_features_csv(const std::vector<FeatureVector>& rows, const std::string& path) {
    std::string out;
    for (const FeatureVector& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0) out.push_back(',');
            append_double(out, row[c]);
        }
        out.push_back('\n');
    }
    write_file(path, out);
}

RelevanceMatrix load_relevance_csv(const std::string& path) {
    const std::string text = read_file(path);
    const std::vector<std::string_view> lines = split_lines(text);
    if (lines.empty()) throw ParseError("empty relevance file: " + path);

    RelevanceMatrix matrix;
    matrix.rows = lines.size();
    for (std::size_t l = 0; l < lines.size(); ++l) {
        const std::size_t line_no = l + 1;
        const std::vector<std::string_view> fields = split_fields(lines[l]);
        if (l == 0) {
            matrix.cols = fields.size();
        } else if (fields.size() != matrix.cols) {
            std::ostringstream os;
            os << "inconsistent dimension at line " << line_no;
            throw ParseError(os.str());
        }
        for (std::size_t f = 0; f < fields.size(); ++f) {
            const std::string_view field = fields[f];
            long long value = 0;
            const char* begin = field.data();
            const char* end = begin + field.size();
            const auto [ptr, ec] = std::from_chars(begin, end, value);
            if (ec != std::errc{} || ptr != end || field.empty()) {
                std::ostringstream os;
                os << "non-numeric field at line " << line_no << ", column " << f + 1;
                throw ParseError(os.str());
            }
            if (value != 0 && value != 1) {
                std::ostringstream os;
                os << "non-binary relevance at (" << l << "," << f << ")";
                throw ParseError(os.str());
            }
            matrix.values.push_back(static_cast<std::uint8_t>(value));
        }
    }
    return matrix;
}

void save_relevance_csv(const RelevanceMatrix& matrix, const std::string& path) {
    std::string out;
    for (std::size_t r = 0; r < matrix.rows; ++r) {
        for (std::size_t c = 0; c < matrix.cols; ++c) {
            if (c > 0) out.push_back(',');
            out.push_back(matrix.values[r * matrix.cols + c] ? '1' : '0');
        }
        out.push_back('\n');
    }
    write_file(path, out);
}

RetrievalDataset load_dataset(const std::string& queries_path, const std::string& database_path,
                              const std::string& relevance_path) {
    RetrievalDataset ds;
    ds.queries = load_features_csv(queries_path);
    ds.database = load_features_csv(database_path);
    if (ds.queries.front().size() != ds.database.front().size()) {
        std::ostringstream os;
        os << "queries have dimension " << ds.queries.front().size() << " but database has "
           << ds.database.front().size();
        throw DimensionError(os.str());
    }
    const RelevanceMatrix relevance = load_relevance_csv(relevance_path);
    if (relevance.rows != ds.queries.size() || relevance.cols != ds.database.size()) {
        std::ostringstream os;
        os << "relevance is " << relevance.rows << "x" << relevance.cols << ", expected "
           << ds.queries.size() << "x" << ds.database.size();
        throw DimensionError(os.str());
    }
    ds.relevance = relevance.values;
    require_valid(ds);
    return ds;
}

void save_dataset(const RetrievalDataset& ds, const std::string& queries_path,
                  const std::string& database_path, const std::string& relevance_path) {
    require_valid(ds);
    save_features_csv(ds.queries, queries_path);
    save_features_csv(ds.database, database_path);
    RelevanceMatrix matrix;
    matrix.rows = ds.num_queries();
    matrix.cols = ds.num_database();
    matrix.values = ds.relevance;
    save_relevance_csv(matrix, relevance_path);
}

}  // namespace topsim
