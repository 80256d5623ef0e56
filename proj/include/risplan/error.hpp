/*
Copyright 2026 The risplan Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#ifndef RISPLAN_ERROR_HPP
#define RISPLAN_ERROR_HPP

#include <stdexcept>
#include <string>

namespace risplan {

// Malformed or inconsistent scenario input. `path` names the offending field
// in the document, e.g. "candidate_sites[2].x".
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string path, const std::string& what)
      : std::runtime_error(path.empty() ? what : path + ": " + what),
        path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

// Argument outside the domain of a numerical model (zero distance, SNR <= 0,
// degenerate PDF, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline void check_positive(double v, const char* name) {
  if (!(v > 0.0)) throw DomainError(std::string(name) + " must be > 0");
}

}  // namespace risplan

#endif  // RISPLAN_ERROR_HPP
