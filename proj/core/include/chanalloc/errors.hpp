// Copyright 2026 The chanalloc Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CHANALLOC_ERRORS_HPP_
#define CHANALLOC_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace chanalloc {

// Invalid system or experiment configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of a routine.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A closed-form approximation was requested outside its validity guard.
class RegimeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace chanalloc

#endif  // CHANALLOC_ERRORS_HPP_
