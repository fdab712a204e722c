#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "sphereqed/config.hpp"
#include "sphereqed/errors.hpp"
#include "sphereqed/textio.hpp"

namespace sqed::cli {

/// CSV emitter: '#' header comments echoing the resolved config, one header
/// row, then rows at fixed significant-digit precision with '\n' endings.
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const RunConfig& config, const std::string& subcommand,
              const std::vector<std::string>& columns);

    void comment(const std::string& text);
    void row(const std::vector<double>& values);
    void row_mixed(const std::vector<std::string>& cells);
    void close();

    const std::string& path() const { return path_; }

  private:
    std::string path_;
    std::ofstream out_;
    int precision_;
    size_t n_columns_;
};

}  // namespace sqed::cli
