// Copyright 2026 The DTactive Sim Authors
//
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

#ifndef DTACTIVE_ERRORS_HPP_
#define DTACTIVE_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace dtactive {

// Invalid argument for a mathematical operation (non-positive radius, zero
// area, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// No object size in the search range can be pinched by the fingertips.
class UngraspableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The object left the grasp: ejected from the gap, slid off the sensor
// planes, or tactile contact was missing for too many frames.
class ObjectLost : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A solve produced non-finite numbers. `dump` carries the offending state.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, std::string dump)
      : std::runtime_error(what), dump_(std::move(dump)) {}
  const std::string& dump() const { return dump_; }

 private:
  std::string dump_;
};

class EstimatorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ControlError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LearningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dtactive

#endif  // DTACTIVE_ERRORS_HPP_
