#include "medal/core/tsv.hpp"

#include <charconv>
#include <sstream>

#include "medal/util/errors.hpp"
#include "medal/util/io.hpp"

namespace medal::core {
namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            cells.push_back(line.substr(start));
            break;
        }
        cells.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return cells;
}

int parse_cell_int(const std::string& cell, const std::string& origin, std::size_t lineno,
                   const std::string& column) {
    int v = 0;
    auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || p != cell.data() + cell.size())
        throw SchemaError(column, origin + ":" + std::to_string(lineno) +
                                      ": column '" + column + "' is not an integer: '" + cell + "'");
    return v;
}

std::vector<std::string> expected_header() {
    std::vector<std::string> header = {"dialogue_id", "annotator_id"};
    for (const auto& name : issue_names()) header.push_back(name);
    header.push_back("overall");
    header.push_back("user_humanlikeness");
    return header;
}

}  // namespace

std::string annotations_to_tsv(const std::vector<AnnotationRecord>& records) {
    std::ostringstream out;
    const auto header = expected_header();
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "\t" : "") << header[i];
    out << "\n";
    for (const auto& r : records) {
        validate(r);
        out << r.dialogue_id << "\t" << r.annotator_id;
        for (int i = 0; i < kIssueCount; ++i) out << "\t" << r.labels[i];
        out << "\t" << r.overall << "\t";
        if (r.user_humanlikeness) out << *r.user_humanlikeness;
        out << "\n";
    }
    return out.str();
}

std::vector<AnnotationRecord> annotations_from_tsv(const std::string& text,
                                                   const std::string& origin) {
    std::vector<AnnotationRecord> records;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    const auto header = expected_header();
    bool header_seen = false;

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cells = split_tabs(line);
        if (!header_seen) {
            if (cells.size() < header.size() - 1)
                throw SchemaError("header", origin + ":1: bad TSV header (expected " +
                                                std::to_string(header.size()) + " columns)");
            for (std::size_t i = 0; i < cells.size() && i < header.size(); ++i)
                if (cells[i] != header[i])
                    throw SchemaError("header", origin + ":1: expected column '" + header[i] +
                                                    "', found '" + cells[i] + "'");
            header_seen = true;
            continue;
        }
        if (cells.size() != header.size() && cells.size() != header.size() - 1)
            throw SchemaError("row", origin + ":" + std::to_string(lineno) + ": expected " +
                                         std::to_string(header.size()) + " columns, found " +
                                         std::to_string(cells.size()));
        AnnotationRecord r;
        r.dialogue_id = cells[0];
        r.annotator_id = cells[1];
        for (int i = 0; i < kIssueCount; ++i)
            r.labels[i] = parse_cell_int(cells[2 + i], origin, lineno, issue_names()[i]);
        r.overall = parse_cell_int(cells[2 + kIssueCount], origin, lineno, "overall");
        if (cells.size() == header.size() && !cells.back().empty())
            r.user_humanlikeness = parse_cell_int(cells.back(), origin, lineno, "user_humanlikeness");
        try {
            validate(r);
        } catch (const SchemaError& e) {
            throw SchemaError(e.field(), origin + ":" + std::to_string(lineno) + ": " + e.what());
        }
        records.push_back(std::move(r));
    }
    if (!header_seen)
        throw SchemaError("header", origin + ": empty TSV file");
    return records;
}

std::vector<AnnotationRecord> read_annotation_tsv(const std::filesystem::path& path) {
    return annotations_from_tsv(read_file(path), path.string());
}

}  // namespace medal::core
