//
// Copyright 2026 The egamma Authors
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
//

#ifndef EGAMMA_ERRORS_H_
#define EGAMMA_ERRORS_H_

#include <stdexcept>
#include <string>

namespace egamma {

// Argument outside the mathematical domain of an operation (negative radius,
// gamma < 1, non-finite input, alpha beyond its admissible range).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Mismatched alphabet sizes, empty kernels, specs that do not line up.
class ShapeError : public std::invalid_argument {
 public:
  explicit ShapeError(const std::string& what) : std::invalid_argument(what) {}
};

// A documented precondition of a closed form does not hold (for example the
// smooth PNSGD bound with eta > 2 / beta).
class PreconditionError : public std::logic_error {
 public:
  explicit PreconditionError(const std::string& what)
      : std::logic_error(what) {}
};

// Quadrature failed to converge, a geometric series diverged, and similar.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what)
      : std::runtime_error(what) {}
};

// Randomized checks that could not produce a single usable sample.
class SamplingError : public std::runtime_error {
 public:
  explicit SamplingError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace egamma

#endif  // EGAMMA_ERRORS_H_
