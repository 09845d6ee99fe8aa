// Copyright 2026 The vvflow Authors
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

#ifndef VVFLOW_CORE_ERROR_HPP_
#define VVFLOW_CORE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace vvflow
{

// Numeric values are shared with vvf_status in the C API.
enum class ErrorCode : int {
  Ok = 0,
  InvalidArgument = 1,
  Io = 2,
  Format = 3,
  MissingColumn = 4,
  CorruptFile = 5,
  ShapeMismatch = 6,
  LengthMismatch = 7,
  EmptySet = 8,
  MissingTargetVehicle = 9,
  LayoutOutOfGrid = 10,
  NumericalBlowup = 11,
  IncompatibleFrameRate = 12,
  OutOfField = 13,
  Internal = 99,
};

class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string & what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string & what) { throw Error(code, what); }

}  // namespace vvflow

#endif  // VVFLOW_CORE_ERROR_HPP_
