#pragma once

#include <stdexcept>
#include <string>

namespace nullframe {

// Base of every exception thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Expression text could not be parsed; position is a 0-based byte offset.
class SyntaxError : public Error {
public:
    SyntaxError(const std::string& message, std::size_t position)
        : Error(message + " (at offset " + std::to_string(position) + ")"),
          position(position) {}
    std::size_t position;
};

// Identifier is neither a declared variable nor a known function.
class UnknownIdentifier : public Error {
public:
    explicit UnknownIdentifier(const std::string& name)
        : Error("unknown identifier '" + name + "'"), name(name) {}
    std::string name;
};

// Evaluation left the domain of a function (sqrt of a negative, division
// by zero, non-finite result).
class DomainError : public Error {
public:
    using Error::Error;
};

// A caller-supplied value violates a documented precondition.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

class NotNull : public Error {
public:
    using Error::Error;
};

class NotPseudoArc : public Error {
public:
    using Error::Error;
};

class DegeneratePseudoArc : public Error {
public:
    using Error::Error;
};

class DegenerateSpan : public Error {
public:
    using Error::Error;
};

class BadInitialFrame : public Error {
public:
    using Error::Error;
};

class CurvatureDegenerate : public Error {
public:
    using Error::Error;
};

class CurvatureNotZero : public Error {
public:
    using Error::Error;
};

class HessianNotZero : public Error {
public:
    using Error::Error;
};

class SchemaError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace nullframe
