#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace teich {

// Every failure mode the library reports carries a stable machine-readable
// code so the CLI can map it to an exit status without string matching.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

struct DomainError : Error {
    explicit DomainError(const std::string& what) : Error("domain", what) {}
};

// Invariant violated while constructing a value (non-Beltrami field,
// non-monotone circle map, matrix not preserving its tagged domain, ...).
struct ValidationError : Error {
    explicit ValidationError(const std::string& what) : Error("validation", what) {}
};

struct PreconditionError : Error {
    explicit PreconditionError(const std::string& what) : Error("precondition", what) {}
};

struct ConvergenceError : Error {
    ConvergenceError(const std::string& what, std::vector<double> trace)
        : Error("convergence", what), residual_trace(std::move(trace)) {}
    std::vector<double> residual_trace;
};

struct SingularityError : Error {
    SingularityError(const std::string& what, std::complex<double> where)
        : Error("singularity", what), location(where) {}
    std::complex<double> location;
};

struct AccuracyError : Error {
    explicit AccuracyError(const std::string& what) : Error("accuracy", what) {}
};

struct SymmetryError : Error {
    explicit SymmetryError(const std::string& what) : Error("symmetry", what) {}
};

struct UnsupportedError : Error {
    explicit UnsupportedError(const std::string& what) : Error("unsupported", what) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error("config", what) {}
};

} // namespace teich
