#ifndef BFST_ERROR_HPP
#define BFST_ERROR_HPP

#include <stdexcept>
#include <string>

namespace bfst {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown when a construction stage exceeds its state/arc budget.
// Carries the name of the stage that blew up, so callers can report
// "not computable at stage X" instead of an opaque failure.
class BudgetError : public Error {
public:
    BudgetError(const std::string& stage, std::size_t states, std::size_t budget)
        : Error("budget exceeded at stage '" + stage + "': " + std::to_string(states) +
                " states, budget " + std::to_string(budget)),
          stage_(stage) {}

    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

// Malformed input file; carries the line number when known.
class ParseError : public Error {
public:
    ParseError(const std::string& file, std::size_t line, const std::string& msg)
        : Error(file + ":" + std::to_string(line) + ": " + msg) {}
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

} // namespace bfst

#endif
