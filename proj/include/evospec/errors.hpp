#pragma once

#include <stdexcept>
#include <string>

namespace evospec {

enum class ErrorKind {
    InvalidArgument,
    Config,
    ResourceLimit,
    Numeric,
};

// Base of every library exception. The kind selects the CLI exit code.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

struct InvalidArgument : Error {
    explicit InvalidArgument(const std::string& w) : Error(ErrorKind::InvalidArgument, w) {}
};
struct InvalidSize : InvalidArgument {
    explicit InvalidSize(const std::string& w) : InvalidArgument("invalid size: " + w) {}
};
struct DomainError : InvalidArgument {
    explicit DomainError(const std::string& w) : InvalidArgument("domain error: " + w) {}
};
struct StoquasticityError : InvalidArgument {
    explicit StoquasticityError(const std::string& w) : InvalidArgument("not stoquastic: " + w) {}
};
struct UnitarityError : InvalidArgument {
    explicit UnitarityError(const std::string& w) : InvalidArgument("not unitary: " + w) {}
};
struct ScalingError : InvalidArgument {
    explicit ScalingError(const std::string& w) : InvalidArgument("scaling error: " + w) {}
};
struct UnsupportedOrder : InvalidArgument {
    explicit UnsupportedOrder(const std::string& w) : InvalidArgument("unsupported order: " + w) {}
};
struct RankError : InvalidArgument {
    explicit RankError(const std::string& w) : InvalidArgument("rank error: " + w) {}
};
struct EmptyModelError : InvalidArgument {
    explicit EmptyModelError(const std::string& w) : InvalidArgument("empty model: " + w) {}
};
struct ConfigError : Error {
    explicit ConfigError(const std::string& w) : Error(ErrorKind::Config, "config error: " + w) {}
};
struct ResourceLimit : Error {
    explicit ResourceLimit(const std::string& w) : Error(ErrorKind::ResourceLimit, "resource limit: " + w) {}
};
struct NumericError : Error {
    explicit NumericError(const std::string& w) : Error(ErrorKind::Numeric, "numeric error: " + w) {}
};
struct InvariantViolation : NumericError {
    explicit InvariantViolation(const std::string& w) : NumericError("invariant violated: " + w) {}
};

// 0 success, 2 config or argument, 3 resource cap, 4 numeric.
int exit_code_for(ErrorKind kind) noexcept;

}  // namespace evospec
