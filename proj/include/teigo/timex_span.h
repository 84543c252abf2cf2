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

#ifndef TEIGO_TIMEX_SPAN_H_
#define TEIGO_TIMEX_SPAN_H_

#include <cstddef>
#include <string>

namespace teigo {

// Character extent of one temporal expression. Offsets count Unicode
// scalar values, not bytes.
struct TimexSpan {
  size_t start = 0;  // inclusive
  size_t end = 0;    // exclusive
  std::string surface;

  size_t length() const { return end - start; }
  bool Overlaps(const TimexSpan& other) const {
    return start < other.end && other.start < end;
  }
};

// Extent equality; the cached surface is not compared.
inline bool SameExtent(const TimexSpan& a, const TimexSpan& b) {
  return a.start == b.start && a.end == b.end;
}

inline bool operator==(const TimexSpan& a, const TimexSpan& b) {
  return SameExtent(a, b) && a.surface == b.surface;
}

}  // namespace teigo

#endif  // TEIGO_TIMEX_SPAN_H_
