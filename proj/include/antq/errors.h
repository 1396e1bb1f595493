// Copyright 2026 The antq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ANTQ_ERRORS_H
#define ANTQ_ERRORS_H

#include <stdexcept>
#include <string>

namespace antq {

/// Argument outside an operation's domain (non-positive radius, length mismatch, ...).
struct InvalidInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Problem size exceeds a configured memory or enumeration cap.
struct ResourceLimit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input file. The message names the offending record.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Ratio metrics are undefined when H_min == 0.
struct DegenerateInstance : std::domain_error {
    using std::domain_error::domain_error;
};

struct NotFound : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad command-line configuration, raised before any compute starts.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace antq

#endif
