/* Copyright 2026 The markmt Authors. All Rights Reserved.

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

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace markmt {

/// Whole file as bytes. Throws Error(kIo).
std::string read_file(const std::filesystem::path &path);

/// Replaces `path` via a temporary file in the same directory. Throws
/// Error(kIo).
void write_file(const std::filesystem::path &path, std::string_view content);

}  // namespace markmt
