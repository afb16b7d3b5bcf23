#ifndef GRANTMINE_REPORT_FORMAT_H_
#define GRANTMINE_REPORT_FORMAT_H_

#include <cstdint>
#include <string>
#include <string_view>

namespace grantmine {

// %.10g, locale-independent; stable across runs for byte-identical reports.
std::string FormatDouble(double value);

// Quotes a CSV field when it holds a comma, quote or line break.
std::string CsvField(std::string_view value);

// 16 lowercase hex digits.
std::string Hex64(std::uint64_t value);

}  // namespace grantmine

#endif  // GRANTMINE_REPORT_FORMAT_H_
