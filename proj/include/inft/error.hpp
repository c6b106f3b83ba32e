#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace inft {

/// Raised when a caller-supplied argument violates an operation's precondition.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A leading block minor (or the Woodbury capacity matrix) is singular or too
/// ill-conditioned to continue.
class Breakdown : public std::runtime_error {
public:
    Breakdown(const std::string& what, int size, double condition)
        : std::runtime_error(what + " (size " + std::to_string(size) + ", condition estimate " +
                             std::to_string(condition) + ")"),
          size_(size),
          condition_(condition) {}

    int size() const noexcept { return size_; }
    double condition() const noexcept { return condition_; }

    /// The same failure, located at sweep time t.
    Breakdown at_time(double t) const {
        Breakdown b(*this, std::string(what()) + " at t = " + std::to_string(t));
        b.t_ = t;
        return b;
    }
    bool has_time() const noexcept { return t_ == t_; }
    double time() const noexcept { return t_; }

private:
    Breakdown(const Breakdown& other, const std::string& message)
        : std::runtime_error(message), size_(other.size_), condition_(other.condition_) {}

    int size_;
    double condition_;
    double t_ = std::numeric_limits<double>::quiet_NaN();
};

inline void require(bool ok, const std::string& message) {
    if (!ok) throw InvalidArgument(message);
}

}  // namespace inft
