// Exception hierarchy for the genbound library.
//
// Convention used throughout the library:
//   * violated preconditions on *inputs* (bad shapes, out-of-domain
//     parameters, malformed config text) throw one of these exceptions;
//   * quantities that are merely undefined or uncertifiable for an
//     otherwise valid input (a bound whose condition fails, an estimator
//     hitting a degenerate sample) are returned as reports carrying an
//     explicit `valid`/`holds` flag and a reason string, never thrown.

#pragma once

#include <stdexcept>
#include <string>

namespace genbound {

// Root of all library exceptions.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

// A structurally invalid input: wrong vector length, empty dataset,
// non-positive sample size, unknown model/estimator identifier, ...
class invalid_input_error : public error {
public:
    explicit invalid_input_error(const std::string& what_arg) : error(what_arg) {}
};

// A numerically out-of-domain request: CGF evaluated at or beyond its
// divergence boundary, entropy of p outside [0,1], tilt parameter outside
// the admissible interval.  The message names the offending boundary.
class domain_error : public error {
public:
    explicit domain_error(const std::string& what_arg) : error(what_arg) {}
};

// Malformed configuration text (unknown key, unparsable value, missing
// required key).  The message carries the 1-based line number when the
// error is attributable to a specific line.
class config_error : public error {
public:
    explicit config_error(const std::string& what_arg) : error(what_arg) {}
};

} // namespace genbound
