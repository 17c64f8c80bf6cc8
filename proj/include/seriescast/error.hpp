#pragma once

#include <stdexcept>
#include <string>

namespace seriescast {

/// Input value outside the mathematical domain of an operation.
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Container length incompatible with the requested operation.
class SizeError : public std::runtime_error {
public:
    explicit SizeError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Model fitting failed to produce a usable result.
class EstimationError : public std::runtime_error {
public:
    explicit EstimationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Input file is missing a required column or header.
class SchemaError : public std::runtime_error {
public:
    explicit SchemaError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Date sequence in an input file has a gap or duplicate.
class ContinuityError : public std::runtime_error {
public:
    explicit ContinuityError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A cell could not be parsed as the expected type.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Filesystem read/write failure.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace seriescast
