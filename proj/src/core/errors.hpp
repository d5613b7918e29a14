#ifndef FIELDINFER_CORE_ERRORS_HPP_
#define FIELDINFER_CORE_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace fieldinfer {

// Coarse classes aligned with process exit codes: 2 config, 3 data, 4 numeric.
enum class ErrorClass { kConfig = 2, kData = 3, kNumeric = 4 };

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, std::string msg)
      : std::runtime_error(std::move(msg)), cls_(cls) {}
  ErrorClass error_class() const { return cls_; }

 private:
  ErrorClass cls_;
};

struct ConfigError : Error {
  explicit ConfigError(std::string m) : Error(ErrorClass::kConfig, std::move(m)) {}
};
struct DataError : Error {
  explicit DataError(std::string m) : Error(ErrorClass::kData, std::move(m)) {}
};
struct NumericError : Error {
  explicit NumericError(std::string m) : Error(ErrorClass::kNumeric, std::move(m)) {}
};

// Grid ingestion.
struct FormatError : DataError {
  explicit FormatError(std::string m) : DataError(std::move(m)) {}
};
struct ParseError : DataError {
  ParseError(std::string m, int row, int col)
      : DataError(std::move(m)), row(row), col(col) {}
  int row, col;  // 1-based location of the offending cell
};
struct EmptyError : DataError {
  explicit EmptyError(std::string m) : DataError(std::move(m)) {}
};
struct IoError : DataError {
  explicit IoError(std::string m) : DataError(std::move(m)) {}
};

// Geometry / configuration.
struct BoundaryError : ConfigError {
  explicit BoundaryError(std::string m) : ConfigError(std::move(m)) {}
};
struct ShapeError : ConfigError {
  explicit ShapeError(std::string m) : ConfigError(std::move(m)) {}
};
struct SizeError : ConfigError {
  explicit SizeError(std::string m) : ConfigError(std::move(m)) {}
};
struct BandwidthTooLargeError : ConfigError {
  explicit BandwidthTooLargeError(std::string m) : ConfigError(std::move(m)) {}
};
struct BlockTooSmallError : ConfigError {
  explicit BlockTooSmallError(std::string m) : ConfigError(std::move(m)) {}
};

}  // namespace fieldinfer

#endif  // FIELDINFER_CORE_ERRORS_HPP_
