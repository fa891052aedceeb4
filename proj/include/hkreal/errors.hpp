#pragma once

#include <stdexcept>
#include <string>

namespace hkreal {

// Base class for everything thrown on purpose by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad input: malformed config, dimension mismatch, matrix that is not an
// isometry, vector outside its lattice, and so on. CLI maps this to exit 2.
struct ValidationError : Error {
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

// The input was well-formed but a computation could not be completed or
// certified: group closure cap exceeded, numeric certification failure,
// verification of a reconstructed lattice failed. CLI maps this to exit 3.
struct ComputeError : Error {
    explicit ComputeError(const std::string& msg) : Error(msg) {}
};

} // namespace hkreal
