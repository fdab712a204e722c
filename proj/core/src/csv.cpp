#include "sphereqed/csv.hpp"

namespace sqed::cli {

CsvWriter::CsvWriter(const std::string& path, const RunConfig& config,
                     const std::string& subcommand, const std::vector<std::string>& columns)
    : path_(path), out_(path, std::ios::binary), precision_(config.precision),
      n_columns_(columns.size()) {
    if (!out_) throw IoError("cannot open output file: " + path);
    out_ << "# sphereqed " << subcommand << "\n";
    for (const auto& [k, v] : config.resolved()) out_ << "# config: " << k << " = " << v << "\n";
    for (size_t i = 0; i < columns.size(); ++i)
        out_ << (i == 0 ? "" : ",") << columns[i];
    out_ << "\n";
}

void CsvWriter::comment(const std::string& text) { out_ << "# " << text << "\n"; }

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != n_columns_) throw IoError("csv row width mismatch");
    for (size_t i = 0; i < values.size(); ++i)
        out_ << (i == 0 ? "" : ",") << textio::format_sig(values[i], precision_);
    out_ << "\n";
}

void CsvWriter::row_mixed(const std::vector<std::string>& cells) {
    if (cells.size() != n_columns_) throw IoError("csv row width mismatch");
    for (size_t i = 0; i < cells.size(); ++i) out_ << (i == 0 ? "" : ",") << cells[i];
    out_ << "\n";
}

void CsvWriter::close() {
    out_.flush();
    if (!out_) throw IoError("failed writing output file: " + path_);
    out_.close();
}

}  // namespace sqed::cli
