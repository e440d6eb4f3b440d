// Error taxonomy shared by the library and the CLI exit-code contract.

#pragma once

#include <stdexcept>
#include <string>

namespace lelong {

class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

// Bad arguments: arity mismatch, nonpositive weights, malformed input files.
struct InputError : Error {
    explicit InputError(const std::string& what, const std::string& code = "input")
        : Error(code, what) {}
};

// Construction would exceed the configured ambient-dimension cap.
struct CapacityError : Error {
    explicit CapacityError(const std::string& what) : Error("capacity", what) {}
};

// Expression is outside the class an exact rule requires.
struct ClassError : Error {
    explicit ClassError(const std::string& what) : Error("class", what) {}
};

// Restriction to a slice on which the function is identically -inf.
struct DegenerateSliceError : Error {
    explicit DegenerateSliceError(const std::string& what) : Error("degenerate-slice", what) {}
};

// All samples hit the -inf locus (estimator cannot proceed).
struct DegenerateSampleError : Error {
    explicit DegenerateSampleError(const std::string& what) : Error("degenerate-sample", what) {}
};

// Bisection bracket endpoints do not straddle the threshold.
struct BracketError : Error {
    explicit BracketError(const std::string& what) : Error("bracket", what) {}
};

}  // namespace lelong
