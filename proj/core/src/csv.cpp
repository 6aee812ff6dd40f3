#include "dcla/csv.hpp"

#include "dcla/error.hpp"

#include <fstream>
#include <sstream>

namespace dcla::csv {

Row parse_line(const std::string& line) {
    Row out;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(ch);
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            out.push_back(std::move(field));
            field.clear();
        } else if (ch == '\r') {
            // tolerate CRLF line endings
        } else {
            field.push_back(ch);
        }
    }
    out.push_back(std::move(field));
    return out;
}

std::vector<Row> read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::MissingFile, "cannot open " + path);
    }
    std::vector<Row> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") {
            continue;
        }
        rows.push_back(parse_line(line));
    }
    return rows;
}

std::string escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) {
        return field;
    }
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') {
            out += "\"\"";
        } else {
            out.push_back(ch);
        }
    }
    out.push_back('"');
    return out;
}

std::string join(const Row& row) {
    std::ostringstream os;
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i > 0) {
            os << ',';
        }
        os << escape(row[i]);
    }
    return os.str();
}

} // namespace dcla::csv
