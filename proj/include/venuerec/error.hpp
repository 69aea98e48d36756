/*
 * Copyright 2026 The venuerec Authors.
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

#pragma once

#include <iostream>
#include <stdexcept>
#include <string>

namespace venuerec {

// Bad arguments or configuration supplied by the caller.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input data that cannot be processed: unreadable files, integrity
// violations, missing or incompatible artifacts.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void log_warning(const std::string& msg) {
  std::cerr << "warning: " << msg << '\n';
}

inline void log_info(const std::string& msg) {
  std::cerr << "info: " << msg << '\n';
}

}  // namespace venuerec
