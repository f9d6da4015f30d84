/*
 Copyright 2026 The probust Authors

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

#pragma once

// CSV emission and atomic file output.

#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace probust {

/// Shortest round-trip decimal form ("%.17g"), "inf"/"-inf"/"nan" otherwise.
std::string format_double(double v);

/// Quotes a field when it holds a comma, quote, CR or LF (quotes doubled).
std::string csv_quote(std::string_view field);

/// In-memory CSV document with a one-line header.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  void row(const std::vector<std::string>& fields);
  std::size_t columns() const noexcept { return columns_; }
  const std::string& str() const noexcept { return text_; }

 private:
  void line(const std::vector<std::string>& fields);

  std::size_t columns_;
  std::string text_;
};

/// Writes `content` to a sibling temporary file and renames it over `path`.
/// Parent directories are created.  Throws Error on I/O failure.
void atomic_write(const std::filesystem::path& path, std::string_view content);

}  // namespace probust
