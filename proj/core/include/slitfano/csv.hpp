#pragma once
#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

namespace slitfano {

inline constexpr const char* kCsvFormatVersion = "slitfano-csv 1";

// 17 significant digits, locale independent.
std::string format_number(double v);
std::string format_number(int v);

// Writes `# format: ...`, the config echo as `# ` lines, then the column header.
class CsvWriter {
public:
    CsvWriter(std::ostream& out, const std::string& config_echo, const std::vector<std::string>& columns);

    void row(const std::vector<std::string>& cells);
    void comment(const std::string& text);
    void columns(const std::vector<std::string>& names); // starts a new block

private:
    std::ostream& out_;
    std::size_t width_ = 0;
};

} // namespace slitfano
