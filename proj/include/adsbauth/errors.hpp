#pragma once

#include <stdexcept>
#include <string>

namespace adsbauth {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value does not fit the bit width of the field it is destined for.
class WidthError : public Error {
public:
    using Error::Error;
};

/// Frame failed its parity check and could not be corrected.
class IntegrityError : public Error {
public:
    using Error::Error;
};

/// The Type Code of an ME field is not one of the protocol's payload codes.
class UnknownPayloadError : public Error {
public:
    using Error::Error;
};

class DegenerateChainError : public Error {
public:
    using Error::Error;
};

class ChainExhaustedError : public Error {
public:
    using Error::Error;
};

class DepthExceededError : public Error {
public:
    using Error::Error;
};

/// A disclosed key does not link to the receiver's newest authenticated key.
class InvalidKeyError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed textual input (hex capture lines, JSON records).
class FormatError : public Error {
public:
    using Error::Error;
};

}  // namespace adsbauth
