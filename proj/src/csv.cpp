#include "diatomic/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace diatomic {

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != header.size())
        throw std::invalid_argument("Table: row width does not match header");
    rows.push_back(std::move(row));
}

namespace {

void emit_field(const std::string& s, std::ostream& os) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        os << s;
        return;
    }
    os << '"';
    for (char c : s) {
        if (c == '"') os << '"';
        os << c;
    }
    os << '"';
}

void emit_cell(const Table::Cell& c, std::ostream& os) {
    if (std::holds_alternative<double>(c)) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", std::get<double>(c));
        os << buf;
    } else {
        emit_field(std::get<std::string>(c), os);
    }
}

}  // namespace

void emit_csv(const Table& table, std::ostream& os) {
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (i) os << ',';
        emit_field(table.header[i], os);
    }
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            emit_cell(row[i], os);
        }
        os << '\n';
    }
}

void emit_csv_file(const Table& table, const std::string& path) {
    std::ofstream os(path, std::ios::binary);  // LF endings everywhere
    if (!os) throw std::runtime_error("emit_csv_file: cannot open " + path);
    emit_csv(table, os);
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

Table::Cell to_cell(const std::string& s) {
    if (!s.empty()) {
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (end && *end == '\0') return Table::Cell{v};
    }
    return Table::Cell{s};
}

}  // namespace

Table parse_csv(std::istream& is) {
    Table t;
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("parse_csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    t.header = split_line(line);
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_line(line);
        if (fields.size() != t.header.size())
            throw std::runtime_error("parse_csv: ragged row");
        std::vector<Table::Cell> row;
        row.reserve(fields.size());
        for (const auto& f : fields) row.push_back(to_cell(f));
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table parse_csv_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("parse_csv_file: cannot open " + path);
    return parse_csv(is);
}

bool tables_equal(const Table& a, const Table& b) {
    if (a.header != b.header || a.rows.size() != b.rows.size()) return false;
    for (std::size_t r = 0; r < a.rows.size(); ++r) {
        if (a.rows[r].size() != b.rows[r].size()) return false;
        for (std::size_t c = 0; c < a.rows[r].size(); ++c)
            if (a.rows[r][c] != b.rows[r][c]) return false;
    }
    return true;
}

}  // namespace diatomic
