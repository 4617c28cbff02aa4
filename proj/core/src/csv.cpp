#include "slitfano/csv.hpp"

#include <cstdio>
#include <ostream>
#include <sstream>

#include "slitfano/types.hpp"

namespace slitfano {

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_number(int v) { return std::to_string(v); }

CsvWriter::CsvWriter(std::ostream& out, const std::string& config_echo, const std::vector<std::string>& columns)
    : out_(out) {
    out_ << "# format: " << kCsvFormatVersion << '\n';
    std::istringstream in(config_echo);
    for (std::string line; std::getline(in, line);) out_ << "# " << line << '\n';
    this->columns(columns);
}

void CsvWriter::columns(const std::vector<std::string>& names) {
    width_ = names.size();
    for (std::size_t i = 0; i < names.size(); ++i) out_ << (i ? "," : "") << names[i];
    out_ << '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != width_) throw Error(ErrorKind::InvalidArgument, "CSV row width does not match the header");
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
}

void CsvWriter::comment(const std::string& text) { out_ << "# " << text << '\n'; }

} // namespace slitfano
