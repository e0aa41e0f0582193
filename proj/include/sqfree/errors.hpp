#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sqfree {

// Every library failure derives from Error so the CLI can map it to exit code 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad arguments: non-coprime moduli, out-of-domain indices, missing certificates.
class ArgumentError : public Error {
public:
    using Error::Error;
};

// A prime table too short to decide the question asked of it.
class CoverageError : public Error {
public:
    using Error::Error;
};

// A request that would exceed a configured memory or size limit.
class ResourceError : public Error {
public:
    using Error::Error;
};

// A search that ran out of its candidate / horizon budget.
class BudgetError : public Error {
public:
    using Error::Error;
};

// omega(p^k) >= p^k and similar violations of a mathematical precondition.
class DomainError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class FormatError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Raised when a finite set fills every residue class modulo p^k.
class NotAdmissibleError : public Error {
public:
    explicit NotAdmissibleError(std::uint64_t prime)
        : Error("set is not admissible: every residue class is occupied modulo a power of " +
                std::to_string(prime)),
          prime_(prime) {}
    std::uint64_t prime() const noexcept { return prime_; }

private:
    std::uint64_t prime_;
};

}  // namespace sqfree
