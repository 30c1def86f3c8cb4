#ifndef DFALEARN_ERRORS_HPP
#define DFALEARN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dfalearn {

// Base for every error raised by this library. Callers that only need a
// coarse success/failure split can catch this one type.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input data problems: bad symbols, malformed sample files, bad bounds.
class InputError : public Error {
public:
    using Error::Error;
};

// A word contains a symbol the automaton's alphabet does not know.
class UnknownSymbolError : public InputError {
public:
    using InputError::InputError;
};

// Model construction misuse: duplicate variable names, references to
// variables that were never declared, invalid objective setup.
class ModelError : public Error {
public:
    using Error::Error;
};

class DuplicateVariableError : public ModelError {
public:
    using ModelError::ModelError;
};

class UndeclaredVariableError : public ModelError {
public:
    using ModelError::ModelError;
};

// Anything that goes wrong while talking to an external solver process or
// while validating what it returned.
class BackendError : public Error {
public:
    using Error::Error;
};

// Solution file defects that we can name precisely.
class MalformedSolutionError : public BackendError {
public:
    using BackendError::BackendError;
};

class NonIntegralValueError : public MalformedSolutionError {
public:
    using MalformedSolutionError::MalformedSolutionError;
};

// The exhaustive search backend refused to start because the candidate
// space exceeds its configured budget.
class BudgetExceededError : public Error {
public:
    using Error::Error;
};

// Data generation cannot proceed because the planted automaton accepts
// everything or nothing within the requested length window.
class DegeneratePlantedDfaError : public InputError {
public:
    using InputError::InputError;
};

// Command line misuse (maps to exit code 2 in the CLI).
class UsageError : public Error {
public:
    using Error::Error;
};

} // namespace dfalearn

#endif
