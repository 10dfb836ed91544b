// Copyright 2026 The fcoupler Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace fcoupler {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed netlist: bad node ids, non-positive values, duplicates.
class InvalidNetworkError : public Error {
public:
    using Error::Error;
};

/// Capacitance matrix (or the block being eliminated) is not positive definite.
class SingularNetworkError : public Error {
public:
    using Error::Error;
};

/// A closed-form approximation was requested for a network that violates
/// the symmetry assumptions it is derived under.
class AssumptionViolationError : public Error {
public:
    using Error::Error;
};

/// Argument outside the domain of a physical formula (E_J = 0 and similar).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A perturbative denominator fell below its floor.
class ResonanceError : public Error {
public:
    using Error::Error;
};

class NoSignChangeError : public Error {
public:
    NoSignChangeError(const std::string& what, double lo_value, double hi_value)
        : Error(what), lo_value(lo_value), hi_value(hi_value) {}
    double lo_value;
    double hi_value;
};

/// Dressed-state labeling could not be made unambiguous.
class LabelingError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

/// Fit setup problems (underdetermined, non-finite guesses).
class FitError : public Error {
public:
    using Error::Error;
};

/// Input file or schema problems.
class SchemaError : public Error {
public:
    using Error::Error;
};

}  // namespace fcoupler
