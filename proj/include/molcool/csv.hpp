#ifndef MOLCOOL_CSV_HPP
#define MOLCOOL_CSV_HPP

#include <fstream>
#include <string>
#include <vector>

namespace molcool {

// Minimal CSV writer with deterministic, round-trip-exact number formatting.
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns);
    ~CsvWriter();

    void cell(double value);
    void cell(long long value);
    void cell(int value) { cell(static_cast<long long>(value)); }
    void cell(const std::string& value);
    void end_row();

    static std::string format(double value);

  private:
    std::ofstream out_;
    std::string path_;
    size_t n_cols_;
    size_t col_ = 0;
    void sep();
};

}  // namespace molcool

#endif
