/*
 * Copyright 2026 The lidaraug Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef LIDARAUG_ERRORS_HPP
#define LIDARAUG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lidaraug {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct EmptyInput : Error {
  explicit EmptyInput(const std::string& what) : Error(what) {}
};

struct MissingLabels : Error {
  explicit MissingLabels(const std::string& what) : Error(what) {}
};

struct LengthMismatch : Error {
  explicit LengthMismatch(const std::string& what) : Error(what) {}
};

struct InsufficientData : Error {
  explicit InsufficientData(const std::string& what) : Error(what) {}
};

struct TooFewPoints : Error {
  explicit TooFewPoints(const std::string& what) : Error(what) {}
};

struct MalformedFile : Error {
  explicit MalformedFile(const std::string& what) : Error(what) {}
};

struct IoFailure : Error {
  explicit IoFailure(const std::string& what) : Error(what) {}
};

struct CountMismatch : Error {
  explicit CountMismatch(const std::string& what) : Error(what) {}
};

struct MissingCalib : Error {
  explicit MissingCalib(const std::string& what) : Error(what) {}
};

struct SchemaViolation : Error {
  explicit SchemaViolation(const std::string& what) : Error(what) {}
};

}  // namespace lidaraug

#endif  // LIDARAUG_ERRORS_HPP
