// Copyright 2026 The teigo Authors.
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

#ifndef TEIGO_UNICODE_H_
#define TEIGO_UNICODE_H_

#include <cstddef>
#include <string>
#include <string_view>

namespace teigo::unicode {

// True iff `bytes` is well-formed UTF-8 (no overlongs, no surrogates).
bool IsValidUtf8(std::string_view bytes);

// Decodes UTF-8 into scalar values. Throws Error(kParse) on invalid input.
std::u32string Decode(std::string_view utf8);

void AppendUtf8(char32_t c, std::string* out);
std::string Encode(std::u32string_view text);

// Number of scalar values in a valid UTF-8 string.
size_t Length(std::string_view utf8);

// Substring by scalar-value offsets [start, end).
std::string Slice(std::string_view utf8, size_t start, size_t end);

// Character classes. Letters and case cover ASCII, Latin-1, Latin
// Extended-A and Greek/Cyrillic basics, which is enough for the shipped
// languages.
bool IsSpace(char32_t c);
bool IsDigit(char32_t c);
bool IsLetter(char32_t c);
bool IsUpper(char32_t c);
bool IsLower(char32_t c);
char32_t ToLower(char32_t c);

std::string ToLowerUtf8(std::string_view utf8);

}  // namespace teigo::unicode

#endif  // TEIGO_UNICODE_H_
