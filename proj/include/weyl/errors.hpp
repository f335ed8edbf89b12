#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace weyl {

/// Parse-time failure; carries the 0-based offset into the input text.
class SyntaxError : public std::runtime_error {
public:
    SyntaxError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " (at position " + std::to_string(pos + 1) + ")"),
          pos_(pos) {}
    std::size_t position() const noexcept { return pos_; }

private:
    std::size_t pos_;
};

class UnknownIdentifier : public SyntaxError {
public:
    UnknownIdentifier(const std::string& name, std::size_t pos)
        : SyntaxError("unknown identifier '" + name + "'", pos), name_(name) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

/// Variable index exceeds the declared number of degrees of freedom,
/// or a phase point / multi-index has the wrong length.
class DimensionMismatch : public std::runtime_error {
public:
    explicit DimensionMismatch(const std::string& msg) : std::runtime_error(msg) {}
};

class DivisionByZero : public std::runtime_error {
public:
    explicit DivisionByZero(const std::string& at)
        : std::runtime_error("division by zero at " + at) {}
};

class NonFinite : public std::runtime_error {
public:
    explicit NonFinite(const std::string& msg) : std::runtime_error(msg) {}
};

class CostGuard : public std::runtime_error {
public:
    explicit CostGuard(const std::string& msg) : std::runtime_error(msg) {}
};

class MethodMismatch : public std::runtime_error {
public:
    explicit MethodMismatch(const std::string& msg) : std::runtime_error(msg) {}
};

class GridTooCoarse : public std::runtime_error {
public:
    explicit GridTooCoarse(const std::string& msg) : std::runtime_error(msg) {}
};

class BoxTooSmall : public std::runtime_error {
public:
    explicit BoxTooSmall(const std::string& msg) : std::runtime_error(msg) {}
};

class QuadratureUnconverged : public std::runtime_error {
public:
    explicit QuadratureUnconverged(const std::string& msg) : std::runtime_error(msg) {}
};

class TailGuard : public std::runtime_error {
public:
    explicit TailGuard(const std::string& msg) : std::runtime_error(msg) {}
};

class InsufficientSamples : public std::runtime_error {
public:
    explicit InsufficientSamples(const std::string& msg) : std::runtime_error(msg) {}
};

class InvalidConfig : public std::runtime_error {
public:
    explicit InvalidConfig(const std::string& msg) : std::runtime_error(msg) {}
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace weyl
