// Copyright 2026 The fedq Authors.
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

#ifndef FEDQ_ERRORS_H_
#define FEDQ_ERRORS_H_

#include <stdexcept>
#include <string>
#include <utility>

namespace fedq {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller passed a value outside an operation's domain (bad shape, label out
// of range, non-finite input, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

// Malformed external file. `field()` names the offending header field or
// section, e.g. "images.magic" or "labels.count".
class ParseError : public Error {
 public:
  ParseError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// An experiment configuration violates a constraint. `key()` is the dotted
// configuration path, e.g. "schedule.lambda_h".
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& constraint)
      : Error(key + ": " + constraint), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

// The federated protocol was driven into an invalid state (e.g. aggregating
// zero updates).
class ProtocolError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  IoError(std::string path, const std::string& what)
      : Error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace fedq

#endif  // FEDQ_ERRORS_H_
