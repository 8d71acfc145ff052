#pragma once

#include <stdexcept>
#include <string>

namespace lonetext {

// Error classes map onto the CLI exit codes:
//   0 success, 1 usage/contract violation, 2 bad data, 3 numerical failure.
enum class ErrorClass { contract = 1, data = 2, numerical = 3 };

class Error : public std::runtime_error {
public:
    Error(ErrorClass cls, const std::string& what)
        : std::runtime_error(what), cls_(cls) {}
    ErrorClass error_class() const noexcept { return cls_; }

private:
    ErrorClass cls_;
};

class ContractError : public Error {
public:
    explicit ContractError(const std::string& what) : Error(ErrorClass::contract, what) {}
};

class DataError : public Error {
public:
    explicit DataError(const std::string& what) : Error(ErrorClass::data, what) {}
};

class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what) : Error(ErrorClass::numerical, what) {}
};

struct MalformedRecord : DataError {
    MalformedRecord(std::size_t line, const std::string& reason)
        : DataError("malformed record at line " + std::to_string(line) + ": " + reason),
          line(line) {}
    std::size_t line;
};

struct UnknownChannel : DataError {
    UnknownChannel(std::size_t line, const std::string& value)
        : DataError("unknown channel \"" + value + "\" at line " + std::to_string(line)) {}
};

struct ScoreOutOfRange : DataError {
    ScoreOutOfRange(std::size_t row, double score)
        : DataError("score " + std::to_string(score) + " out of [0,100] at row " +
                    std::to_string(row)) {}
};

struct EmptyDataset : DataError {
    explicit EmptyDataset(const std::string& what = "dataset is empty") : DataError(what) {}
};

struct EmptyVocabulary : DataError {
    EmptyVocabulary() : DataError("vocabulary is empty") {}
};

struct EmptyInput : ContractError {
    EmptyInput() : ContractError("input is empty") {}
};

struct LengthMismatch : ContractError {
    LengthMismatch(std::size_t a, std::size_t b)
        : ContractError("length mismatch: " + std::to_string(a) + " vs " + std::to_string(b)) {}
};

struct TooShort : ContractError {
    explicit TooShort(const std::string& what) : ContractError(what) {}
};

struct TooFewExamples : ContractError {
    explicit TooFewExamples(const std::string& what) : ContractError(what) {}
};

struct DimensionMismatch : ContractError {
    DimensionMismatch(std::size_t expected, std::size_t got)
        : ContractError("dimension mismatch: expected " + std::to_string(expected) +
                        ", got " + std::to_string(got)) {}
};

struct ModelVocabMismatch : ContractError {
    ModelVocabMismatch(std::size_t model_v, std::size_t data_v)
        : ContractError("model vocabulary size " + std::to_string(model_v) +
                        " does not match data vocabulary size " + std::to_string(data_v)) {}
};

struct InvalidTopicCount : ContractError {
    explicit InvalidTopicCount(int t)
        : ContractError("topic count must be >= 1, got " + std::to_string(t)) {}
};

struct SingleClassTraining : ContractError {
    SingleClassTraining() : ContractError("training data contains a single class") {}
};

struct NonFiniteFeature : DataError {
    NonFiniteFeature(std::size_t row, std::size_t col)
        : DataError("non-finite feature value at row " + std::to_string(row) +
                    ", column " + std::to_string(col)) {}
};

struct WrongFeatureKind : ContractError {
    explicit WrongFeatureKind(const std::string& what) : ContractError(what) {}
};

struct InvalidSpec : ContractError {
    explicit InvalidSpec(const std::string& what) : ContractError(what) {}
};

struct NumericalFailure : NumericalError {
    explicit NumericalFailure(const std::string& what) : NumericalError(what) {}
};

}  // namespace lonetext
