/* Copyright 2026 The symev Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// File helpers and content digests.

#ifndef SYMEV_IO_HPP_
#define SYMEV_IO_HPP_

#include <filesystem>
#include <string>
#include <string_view>

namespace symev {

std::string ReadFile(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it over `path`.
void WriteFileAtomic(const std::filesystem::path& path, std::string_view contents);

// Lower-case hex SHA-256.
std::string Sha256Hex(std::string_view bytes);

}  // namespace symev

#endif  // SYMEV_IO_HPP_
