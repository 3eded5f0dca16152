#ifndef DYADIC_ERRORS_HPP
#define DYADIC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dyadic {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed arguments: dimension mismatch, cube outside mesh, bad file content.
class InputError : public Error {
public:
    using Error::Error;
};

/// A cube carries zero mass under the requested measure.
class DegenerateMeasureError : public Error {
public:
    using Error::Error;
};

/// Negative power of a vanishing cell value.
class SingularityError : public Error {
public:
    using Error::Error;
};

/// Dual weight w^{1-p'} fails local integrability.
class NonIntegrableDualError : public Error {
public:
    using Error::Error;
};

/// Input that makes the requested construction meaningless (e.g. f == 0).
class DegenerateInputError : public Error {
public:
    using Error::Error;
};

/// Parameters violate a stated admissibility condition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// The shifted-grid covering search found no cube; would falsify the covering lemma.
class FalsifiedLemmaError : public Error {
public:
    using Error::Error;
};

/// A tower/series truncation depth too shallow for the requested accuracy.
class DepthInsufficientError : public Error {
public:
    using Error::Error;
};

/// Arithmetic left the exactly representable range.
class OverflowError : public Error {
public:
    using Error::Error;
};

} // namespace dyadic

#endif
