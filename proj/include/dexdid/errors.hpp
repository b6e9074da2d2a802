#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace dexdid {

// Input-side failures: malformed files, bad hex, schema violations.
struct DecodeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A pool reserve read as zero where a price would be derived from it.
struct DegenerateReserve : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct WindowTooLong : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmptySeries : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Zero-variance series; the asset cannot be standardized or correlated.
struct DegenerateSeries : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CannotNormalize : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InsufficientOverlap : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoCounterfactuals : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CollinearityError : std::runtime_error {
  explicit CollinearityError(const std::string& msg, std::vector<std::string> cols = {})
      : std::runtime_error(msg), columns(std::move(cols)) {}
  std::vector<std::string> columns;
};

struct TooFewClusters : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MissingSupply : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Event-level abort: the treated asset cannot enter the regression.
struct EventAborted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace dexdid
