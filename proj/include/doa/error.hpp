// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace doa {

// Invalid user-supplied configuration: bad geometry, malformed scenario file,
// out-of-range parameter. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Scenario violates the estimation model (e.g. as many sources as array
// elements). Maps to CLI exit code 3.
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Caller broke an API precondition: odd lag, empty input, non-Hermitian
// matrix handed to the Hermitian solver. Maps to CLI exit code 3.
class ContractError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace doa
