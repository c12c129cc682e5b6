// Copyright 2026 The Curator Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace curator::text {

// Decodes UTF-8 into code points. Malformed bytes decode to U+FFFD.
std::u32string decode_utf8(std::string_view s);
std::string encode_utf8(char32_t cp);

std::size_t codepoint_count(std::string_view s);

bool is_han(char32_t cp);
bool is_kana(char32_t cp);
bool is_hangul(char32_t cp);
bool is_ascii_alnum(char32_t cp);

// Strips ASCII whitespace from both ends.
std::string trim(std::string_view s);

// Fallback caption segmenter: whitespace split when the text has an ASCII
// space, otherwise one token per character with ASCII alphanumeric runs
// kept together.
std::vector<std::string> segment(std::string_view s);

}  // namespace curator::text
