#ifndef XAITU_ERRORS_HPP
#define XAITU_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace xaitu {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input file (CSV, model JSON, snapshot JSON). The message
/// carries the offending location (JSON path or row/column).
struct SchemaError : Error {
  using Error::Error;
};

/// Input row length does not match the predictor (or dataset) arity.
struct ArityError : Error {
  using Error::Error;
};

/// A predictor returned NaN or infinity.
struct NonFiniteError : Error {
  using Error::Error;
};

/// A computation was refused because it would exceed a size guard
/// (e.g. exact SHAP for n > 25 without force).
struct GuardError : Error {
  using Error::Error;
};

/// A snapshot-backed game was queried outside its declared coalition family.
struct FamilyError : Error {
  using Error::Error;
};

/// Dataset-level problem (missing values, duplicate columns, bad row index).
struct DataError : Error {
  using Error::Error;
};

/// A game generator could not satisfy its mode's hypotheses.
struct GeneratorExhausted : Error {
  using Error::Error;
};

}  // namespace xaitu

#endif
