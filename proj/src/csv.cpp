#include "molcool/csv.hpp"

#include <cstdio>

#include "molcool/errors.hpp"

namespace molcool {

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : out_(path), path_(path), n_cols_(columns.size()) {
    if (!out_) throw IoError("cannot open output file: " + path);
    for (size_t i = 0; i < columns.size(); ++i) {
        if (i) out_ << ',';
        out_ << columns[i];
    }
    out_ << '\n';
}

CsvWriter::~CsvWriter() {
    out_.flush();
}

std::string CsvWriter::format(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

void CsvWriter::sep() {
    if (col_) out_ << ',';
}

void CsvWriter::cell(double value) {
    sep();
    out_ << format(value);
    ++col_;
}

void CsvWriter::cell(long long value) {
    sep();
    out_ << value;
    ++col_;
}

void CsvWriter::cell(const std::string& value) {
    sep();
    out_ << value;
    ++col_;
}

void CsvWriter::end_row() {
    if (col_ != n_cols_) throw IoError("CSV row width mismatch in " + path_);
    out_ << '\n';
    col_ = 0;
    if (!out_) throw IoError("write failure on " + path_);
}

}  // namespace molcool
