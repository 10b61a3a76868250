#pragma once

#include <stdexcept>
#include <string>

namespace pdnet {

struct NormalizationEmpty : std::runtime_error {
    explicit NormalizationEmpty(const std::string& raw)
        : std::runtime_error("name is empty after normalization: \"" + raw + "\"") {}
};

struct UrlParseError : std::runtime_error {
    explicit UrlParseError(const std::string& raw)
        : std::runtime_error("cannot parse URL: \"" + raw + "\"") {}
};

struct CorpusNotFound : std::runtime_error {
    explicit CorpusNotFound(const std::string& root)
        : std::runtime_error("corpus root does not exist: " + root) {}
};

struct ParseFailed : std::runtime_error {
    explicit ParseFailed(const std::string& what) : std::runtime_error(what) {}
};

struct ExtractionUnavailable : std::runtime_error {
    explicit ExtractionUnavailable(const std::string& what) : std::runtime_error(what) {}
};

struct InvariantViolation : std::logic_error {
    explicit InvariantViolation(const std::string& what) : std::logic_error(what) {}
};

struct BuildError : std::runtime_error {
    explicit BuildError(const std::string& what) : std::runtime_error(what) {}
};

struct ExportError : std::runtime_error {
    explicit ExportError(const std::string& what) : std::runtime_error(what) {}
};

struct QueryError : std::runtime_error {
    explicit QueryError(const std::string& what) : std::runtime_error(what) {}
};

struct NotFound : std::runtime_error {
    explicit NotFound(const std::string& what) : std::runtime_error(what) {}
};

struct EvalError : std::runtime_error {
    explicit EvalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pdnet
