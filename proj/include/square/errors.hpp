#pragma once

#include <stdexcept>
#include <string>

namespace square {

// Base class for all engine errors. Subclasses carry enough context to
// produce an actionable message at the CLI boundary.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class FileNotFoundError : public Error {
public:
  explicit FileNotFoundError(const std::string& path)
      : Error("file not found: " + path), path(path) {}
  std::string path;
};

class UnsupportedFormatError : public Error {
public:
  explicit UnsupportedFormatError(const std::string& path)
      : Error("unsupported spreadsheet format: " + path), path(path) {}
  std::string path;
};

class ParseError : public Error {
public:
  ParseError(const std::string& path, const std::string& detail, long row = -1,
             long col = -1)
      : Error(format(path, detail, row, col)),
        path(path),
        detail(detail),
        row(row),
        col(col) {}
  std::string path;
  std::string detail;
  long row;
  long col;

private:
  static std::string format(const std::string& path, const std::string& detail,
                            long row, long col) {
    std::string msg = "parse error in " + path + ": " + detail;
    if (row >= 0) msg += " (row " + std::to_string(row) + ")";
    if (col >= 0) msg += " (col " + std::to_string(col) + ")";
    return msg;
  }
};

class OutOfBoundsError : public Error {
public:
  OutOfBoundsError(long row, long col)
      : Error("cell index out of bounds: (" + std::to_string(row) + ", " +
              std::to_string(col) + ")") {}
};

class EmptySheetError : public Error {
public:
  explicit EmptySheetError(const std::string& sheet)
      : Error("sheet is empty: " + sheet) {}
};

class NotFlatError : public Error {
public:
  explicit NotFlatError(const std::string& sheet)
      : Error("relational view requires a Flat sheet: " + sheet) {}
};

class SqlParseError : public Error {
public:
  SqlParseError(const std::string& detail, std::size_t position)
      : Error("SQL parse error at position " + std::to_string(position) +
              ": " + detail),
        position(position) {}
  std::size_t position;
};

class SqlUnsupportedFeatureError : public Error {
public:
  explicit SqlUnsupportedFeatureError(const std::string& feature)
      : Error("unsupported SQL feature: " + feature), feature(feature) {}
  std::string feature;
};

class UnknownColumnError : public Error {
public:
  UnknownColumnError(const std::string& name, const std::string& suggestion)
      : Error(suggestion.empty()
                  ? "unknown column: " + name
                  : "unknown column: " + name + " (did you mean \"" +
                        suggestion + "\"?)"),
        name(name),
        suggestion(suggestion) {}
  std::string name;
  std::string suggestion;
};

class TypeMismatchError : public Error {
public:
  TypeMismatchError(const std::string& column, const std::string& detail)
      : Error("type mismatch on column " + column + ": " + detail),
        column(column) {}
  std::string column;
};

class OverflowError : public Error {
public:
  explicit OverflowError(const std::string& detail)
      : Error("numeric overflow: " + detail) {}
};

class EmptyIndexError : public Error {
public:
  EmptyIndexError() : Error("vector index is empty") {}
};

class EmbedderUnavailableError : public Error {
public:
  explicit EmbedderUnavailableError(const std::string& detail)
      : Error("embedder unavailable: " + detail) {}
};

class BackendUnavailableError : public Error {
public:
  explicit BackendUnavailableError(const std::string& detail)
      : Error("model backend unavailable: " + detail) {}
};

class ScriptMissError : public Error {
public:
  explicit ScriptMissError(const std::string& detail)
      : Error("mock script has no entry for request: " + detail) {}
};

class GeneratorUnavailableError : public Error {
public:
  explicit GeneratorUnavailableError(const std::string& detail)
      : Error("SQL generator unavailable: " + detail) {}
};

class IndexMissingError : public Error {
public:
  explicit IndexMissingError(const std::string& sheet)
      : Error("indexes not built for sheet: " + sheet) {}
};

class EmptyGoldError : public Error {
public:
  EmptyGoldError() : Error("gold evidence set is empty") {}
};

class DatasetParseError : public Error {
public:
  DatasetParseError(std::size_t line, const std::string& detail)
      : Error("dataset parse error at line " + std::to_string(line) + ": " +
              detail),
        line(line) {}
  std::size_t line;
};

class MissingWorkbookError : public Error {
public:
  explicit MissingWorkbookError(const std::string& path)
      : Error("workbook referenced by dataset not found: " + path) {}
};

}  // namespace square
