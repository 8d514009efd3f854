#pragma once

#include <stdexcept>
#include <string>

namespace heckej {

/// Base of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnsupportedType : public Error {
public:
    using Error::Error;
};

class GroupMismatch : public Error {
public:
    using Error::Error;
};

/// A computation needs elements beyond the radius of a table it was given.
class RadiusExceeded : public Error {
public:
    using Error::Error;
};

/// Shifted polynomial still has a negative exponent; the shift was too small.
class NotInAPlus : public Error {
public:
    using Error::Error;
};

class NonInvertibleTerm : public Error {
public:
    using Error::Error;
};

class DivergentTail : public Error {
public:
    using Error::Error;
};

/// Valuation threshold cannot be decided modulo p^m.
class DepthTooSmall : public Error {
public:
    using Error::Error;
};

class BudgetExceeded : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace heckej
