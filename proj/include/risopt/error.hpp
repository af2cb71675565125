// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <stdexcept>
#include <string>

namespace risopt {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or incomplete configuration (missing key, unparsable value, unknown key).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A parameter is present but violates its physical range.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Argument outside the domain of an operation (N out of range, w outside (0,1), ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// No admissible element count exists, or the requested N exceeds the frame budget.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

/// Feedback channel with zero gain: the configuration can never be reported.
class DegenerateChannelError : public Error {
public:
    using Error::Error;
};

/// Caller broke an operation contract (e.g. trade-off anchors that are not the true optima).
class ContractError : public Error {
public:
    using Error::Error;
};

/// Exhaustive search refused because the candidate range exceeds the configured cap.
class OracleCapError : public Error {
public:
    using Error::Error;
};

/// A Monte Carlo run skipped too many infeasible realizations.
class InfeasibleRunError : public Error {
public:
    using Error::Error;
};

} // namespace risopt
