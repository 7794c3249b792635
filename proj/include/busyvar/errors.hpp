#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace busyvar {

// A numeric routine could not deliver the requested accuracy. Carries the
// best estimate produced before giving up.
class NumericError : public std::runtime_error {
public:
    enum class Kind { budget_exhausted, integrand_invalid, series_diverged };

    NumericError(Kind kind, const std::string& what, double best_estimate)
        : std::runtime_error(what), kind_(kind), best_estimate_(best_estimate) {}

    Kind kind() const noexcept { return kind_; }
    double best_estimate() const noexcept { return best_estimate_; }

private:
    Kind kind_;
    double best_estimate_;
};

// A required moment (mean, second or third raw moment) is infinite for the
// requested operation.
class InfiniteMomentError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Distribution mini-DSL parse failure; position is a byte offset into the
// input text.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t position)
        : std::runtime_error(what + " (at position " + std::to_string(position) + ")"),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

}  // namespace busyvar
