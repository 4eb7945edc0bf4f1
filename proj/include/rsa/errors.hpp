#pragma once

#include <stdexcept>
#include <string>

namespace rsa {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// fits_io
struct MissingSimple : Error { using Error::Error; };
struct UnsupportedBitpix : Error { using Error::Error; };
struct UnsupportedNaxis : Error { using Error::Error; };
struct TruncatedData : Error { using Error::Error; };
struct MalformedCard : Error { using Error::Error; };

// rescale / filtering / levelset
struct ConstantImage : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct CflViolation : Error { using Error::Error; };
struct DegenerateRange : Error { using Error::Error; };

// cli / config
struct ConfigError : Error { using Error::Error; };

}  // namespace rsa
