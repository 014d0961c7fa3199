#ifndef DIATOMIC_CSV_HPP
#define DIATOMIC_CSV_HPP

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace diatomic {

// Rectangular table with string or double cells. Doubles are emitted with
// %.17g so a parse/emit round trip is bit-exact.
struct Table {
    using Cell = std::variant<double, std::string>;
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row);
};

void emit_csv(const Table& table, std::ostream& os);
void emit_csv_file(const Table& table, const std::string& path);

// Parses a CSV produced by emit_csv (RFC-4180-style quoting, LF endings).
// Cells that parse fully as doubles become doubles.
Table parse_csv(std::istream& is);
Table parse_csv_file(const std::string& path);

bool tables_equal(const Table& a, const Table& b);

}  // namespace diatomic

#endif
