// SPDX-License-Identifier: Apache-2.0
//
// ncprec - downlink precoding under improper Gaussian jamming
// Copyright (C) 2026 The ncprec authors
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

namespace ncprec
{

// Base class of every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class NotPositiveDefinite : public Error
{
public:
    using Error::Error;
};

class InfeasibleQ : public Error
{
public:
    using Error::Error;
};

class InvalidConfidence : public Error
{
public:
    using Error::Error;
};

class InvalidArgument : public Error
{
public:
    using Error::Error;
};

// Raised by the QP kernel when no point satisfies all constraints.
class Infeasible : public Error
{
public:
    using Error::Error;
};

class MaxIterations : public Error
{
public:
    using Error::Error;
};

// A constraint row of an SLP problem is identically zero (e.g. a null channel).
class ZeroRow : public Error
{
public:
    using Error::Error;
};

class ConfigError : public Error
{
public:
    using Error::Error;
};

} // namespace ncprec
