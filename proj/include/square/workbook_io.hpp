#pragma once

#include <filesystem>
#include <string>

#include "square/cells.hpp"
#include "square/csv.hpp"
#include "square/errors.hpp"
#include "square/xlsx.hpp"

namespace square {

struct LoadOptions {
  char delimiter = ',';
};

// Loads XLSX or delimited text into the uniform grid model. Delimited files
// yield a single sheet named after the file stem, with no merged regions.
inline Workbook load_workbook(const std::string& path, const LoadOptions& options = {}) {
  namespace fs = std::filesystem;
  if (!fs::exists(path)) throw FileNotFoundError(path);

  std::string ext = text::to_lower(fs::path(path).extension().string());
  if (ext == ".xlsx") {
    Workbook wb = xlsx::load(path);
    for (const auto& sheet : wb.sheets) validate_sheet(sheet, path);
    return wb;
  }
  if (ext == ".csv" || ext == ".tsv") {
    char delim = options.delimiter;
    if (ext == ".tsv" && delim == ',') delim = '\t';
    Workbook wb;
    wb.source_path = path;
    wb.sheets.push_back(csv::load_sheet(path, fs::path(path).stem().string(), delim));
    if (wb.sheets.front().empty()) throw ParseError(path, "no cells parsed");
    return wb;
  }
  throw UnsupportedFormatError(path);
}

}  // namespace square
