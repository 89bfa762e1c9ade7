#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace cacluster {

// Base of every error the library throws. The optional stage tag is filled in
// by the pipeline driver so diagnostics say which step failed.
class Error : public std::runtime_error {
public:
    explicit Error(std::string message)
        : std::runtime_error(message), message_(std::move(message)), what_(message_) {}

    const char* what() const noexcept override { return what_.c_str(); }

    const std::string& message() const noexcept { return message_; }
    const std::string& stage() const noexcept { return stage_; }

    void set_stage(std::string stage) {
        stage_ = std::move(stage);
        what_ = stage_.empty() ? message_ : stage_ + ": " + message_;
    }

private:
    std::string message_;
    std::string stage_;
    std::string what_;
};

// Bad argument or violated precondition.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Cell count above what the engine is configured to enumerate.
class CapacityError : public Error {
public:
    using Error::Error;
};

// Rule is not injective at the requested cell count.
class IrreversibleError : public Error {
public:
    IrreversibleError(std::string message, unsigned cells)
        : Error(std::move(message)), cells_(cells) {}
    unsigned cells() const noexcept { return cells_; }

private:
    unsigned cells_;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class UnknownCategoryError : public Error {
public:
    using Error::Error;
};

// Fewer data-bearing cycles than requested clusters.
class InsufficientCyclesError : public Error {
public:
    using Error::Error;
};

class DepthExceededError : public Error {
public:
    using Error::Error;
};

class CatalogRangeError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace cacluster
