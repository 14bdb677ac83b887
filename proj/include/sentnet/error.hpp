#pragma once

#include <stdexcept>
#include <string>

namespace sentnet {

// Base class for all library errors. Subclasses map onto CLI exit codes:
// data/format problems exit 2, numeric failures exit 3.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Tensor shapes do not conform to an op's contract.
class ShapeError : public Error {
public:
    explicit ShapeError(const std::string& msg) : Error(msg) {}
};

// l2-normalization of a vector with norm below 1e-12.
class DegenerateNormError : public Error {
public:
    explicit DegenerateNormError(const std::string& msg) : Error(msg) {}
};

// A precondition of an operation was violated by the caller.
class ContractError : public Error {
public:
    explicit ContractError(const std::string& msg) : Error(msg) {}
};

// A gradient-check builder produced different losses on repeat evaluation.
class DeterminismError : public Error {
public:
    explicit DeterminismError(const std::string& msg) : Error(msg) {}
};

// Malformed input file; message carries file:line where known.
class FormatError : public Error {
public:
    explicit FormatError(const std::string& msg) : Error(msg) {}
};

// A system response is missing from the candidate list.
class UnknownCandidateError : public Error {
public:
    explicit UnknownCandidateError(const std::string& msg) : Error(msg) {}
};

// A numeric argument is outside its allowed range.
class RangeError : public Error {
public:
    explicit RangeError(const std::string& msg) : Error(msg) {}
};

// A pretrained vector file has the wrong dimensionality.
class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& msg) : Error(msg) {}
};

// An embedding snapshot was built for a different vocabulary.
class VocabMismatchError : public Error {
public:
    explicit VocabMismatchError(const std::string& msg) : Error(msg) {}
};

// Training hit a non-finite loss; message carries full diagnostics.
class TrainingDivergedError : public Error {
public:
    explicit TrainingDivergedError(const std::string& msg) : Error(msg) {}
};

} // namespace sentnet
