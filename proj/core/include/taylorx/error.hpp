/*
 * Copyright 2026 The taylorx Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef TAYLORX_ERROR_HPP_
#define TAYLORX_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace taylorx {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input vectors, baselines or models whose sizes disagree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Evaluation left the domain the math is defined on: non-finite values,
// a ReLU kink hit exactly, or a non-analytic activation inside a jet.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A requested enumeration or expansion exceeds its configured limit.
class BudgetError : public Error {
 public:
  using Error::Error;
};

// Operation is not defined for the given model kind or method.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// Malformed text input. Carries the 1-based line and the offending field.
class ParseError : public Error {
 public:
  ParseError(std::string source, std::size_t line, std::string field,
             const std::string& message)
      : Error(source + ":" + std::to_string(line) +
              (field.empty() ? std::string() : " [" + field + "]") + ": " +
              message),
        source_(std::move(source)),
        line_(line),
        field_(std::move(field)) {}

  const std::string& source() const { return source_; }
  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::string source_;
  std::size_t line_;
  std::string field_;
};

// Malformed binary input. Carries the byte offset where decoding failed.
class BinaryFormatError : public Error {
 public:
  BinaryFormatError(std::size_t offset, const std::string& message)
      : Error("byte " + std::to_string(offset) + ": " + message),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Invalid experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace taylorx

#endif  // TAYLORX_ERROR_HPP_
