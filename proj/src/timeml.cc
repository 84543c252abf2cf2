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

// Minimal XML scanner for TimeML documents: elements, attributes, text,
// character references, comments, CDATA, processing instructions and a
// DOCTYPE declaration. Namespaces and external entities are not supported.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "teigo/corpus.h"
#include "teigo/error.h"
#include "teigo/unicode.h"

namespace teigo {
namespace {

[[noreturn]] void ParseFail(size_t byte, std::string_view what) {
  throw Error(ErrorKind::kParse,
              fmt::format("malformed XML at byte {}: {}", byte, what));
}

bool IsNameChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
         c == '.' || c == ':' || static_cast<unsigned char>(c) >= 0x80;
}

bool IsXmlSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r';
}

// Text accumulated for one candidate body, with spans in scalar offsets.
struct Capture {
  std::string text;
  size_t length = 0;
  std::vector<TimexSpan> spans;

  void Append(std::string_view piece) {
    text.append(piece);
    length += unicode::Length(piece);
  }
};

class TimeMlScanner {
 public:
  explicit TimeMlScanner(std::string_view xml) : xml_(xml) {}

  Document Run() {
    if (!unicode::IsValidUtf8(xml_)) {
      size_t bad = 0;
      while (bad < xml_.size() && unicode::IsValidUtf8(xml_.substr(0, bad + 1))) {
        ++bad;
      }
      ParseFail(bad, "invalid UTF-8");
    }
    bool root_closed = false;
    while (pos_ < xml_.size()) {
      if (xml_[pos_] == '<') {
        if (StartsWith("<?")) {
          Skip("?>");
        } else if (StartsWith("<!--")) {
          Skip("-->");
        } else if (StartsWith("<![CDATA[")) {
          const size_t begin = pos_ + 9;
          Skip("]]>");
          if (stack_.empty()) ParseFail(begin, "CDATA outside the root element");
          EmitText(xml_.substr(begin, pos_ - 3 - begin));
        } else if (StartsWith("<!DOCTYPE")) {
          SkipDoctype();
        } else if (StartsWith("</")) {
          CloseTag();
          if (stack_.empty()) root_closed = true;
        } else {
          if (root_closed || (stack_.empty() && seen_root_)) {
            ParseFail(pos_, "content after the root element");
          }
          OpenTag();
          if (stack_.empty()) root_closed = true;
        }
      } else {
        const size_t begin = pos_;
        while (pos_ < xml_.size() && xml_[pos_] != '<') ++pos_;
        const std::string_view raw = xml_.substr(begin, pos_ - begin);
        if (stack_.empty()) {
          for (char c : raw) {
            if (!IsXmlSpace(c)) ParseFail(begin, "text outside the root element");
          }
          continue;
        }
        EmitText(DecodeEntities(raw, begin));
      }
    }
    if (!stack_.empty()) {
      ParseFail(xml_.size(), fmt::format("unclosed element <{}>", stack_.back()));
    }
    if (!seen_root_) ParseFail(xml_.size(), "no root element");

    Document doc;
    Capture& body = seen_text_element_ ? text_body_ : root_body_;
    doc.text = std::move(body.text);
    doc.spans = std::move(body.spans);
    doc.dct = dct_;
    return doc;
  }

 private:
  bool StartsWith(std::string_view prefix) const {
    return xml_.substr(pos_, prefix.size()) == prefix;
  }

  void Skip(std::string_view terminator) {
    const size_t found = xml_.find(terminator, pos_);
    if (found == std::string_view::npos) {
      ParseFail(pos_, fmt::format("missing '{}'", terminator));
    }
    pos_ = found + terminator.size();
  }

  void SkipDoctype() {
    int bracket = 0;
    for (size_t i = pos_; i < xml_.size(); ++i) {
      if (xml_[i] == '[') ++bracket;
      if (xml_[i] == ']') --bracket;
      if (xml_[i] == '>' && bracket == 0) {
        pos_ = i + 1;
        return;
      }
    }
    ParseFail(pos_, "unterminated DOCTYPE");
  }

  std::string ReadName() {
    const size_t begin = pos_;
    while (pos_ < xml_.size() && IsNameChar(xml_[pos_])) ++pos_;
    if (pos_ == begin) ParseFail(begin, "expected a name");
    return std::string(xml_.substr(begin, pos_ - begin));
  }

  void SkipSpace() {
    while (pos_ < xml_.size() && IsXmlSpace(xml_[pos_])) ++pos_;
  }

  std::string DecodeEntities(std::string_view raw, size_t base) const {
    std::string out;
    out.reserve(raw.size());
    for (size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] != '&') {
        out.push_back(raw[i]);
        continue;
      }
      const size_t semi = raw.find(';', i);
      if (semi == std::string_view::npos) ParseFail(base + i, "unterminated entity");
      const std::string_view name = raw.substr(i + 1, semi - i - 1);
      if (name == "amp") out.push_back('&');
      else if (name == "lt") out.push_back('<');
      else if (name == "gt") out.push_back('>');
      else if (name == "quot") out.push_back('"');
      else if (name == "apos") out.push_back('\'');
      else if (name.size() > 1 && name[0] == '#') {
        const bool hex = name[1] == 'x' || name[1] == 'X';
        const std::string digits(name.substr(hex ? 2 : 1));
        char32_t code = 0;
        if (digits.empty()) ParseFail(base + i, "empty character reference");
        for (char d : digits) {
          const int v = std::isdigit(static_cast<unsigned char>(d))
                            ? d - '0'
                            : (hex && std::isxdigit(static_cast<unsigned char>(d))
                                   ? (std::tolower(d) - 'a' + 10)
                                   : -1);
          if (v < 0) ParseFail(base + i, "bad character reference");
          code = code * (hex ? 16 : 10) + static_cast<char32_t>(v);
          if (code > 0x10FFFF) ParseFail(base + i, "character reference out of range");
        }
        if (code >= 0xD800 && code <= 0xDFFF) {
          ParseFail(base + i, "surrogate character reference");
        }
        unicode::AppendUtf8(code, &out);
      } else {
        ParseFail(base + i, fmt::format("unknown entity '&{};'", name));
      }
      i = semi;
    }
    return out;
  }

  void OpenTag() {
    const size_t tag_start = pos_;
    ++pos_;
    const std::string name = ReadName();
    std::map<std::string, std::string> attrs;
    bool self_closing = false;
    for (;;) {
      SkipSpace();
      if (pos_ >= xml_.size()) ParseFail(tag_start, "unterminated tag");
      if (xml_[pos_] == '>') {
        ++pos_;
        break;
      }
      if (StartsWith("/>")) {
        pos_ += 2;
        self_closing = true;
        break;
      }
      const size_t attr_pos = pos_;
      std::string key = ReadName();
      SkipSpace();
      if (pos_ >= xml_.size() || xml_[pos_] != '=') ParseFail(pos_, "expected '='");
      ++pos_;
      SkipSpace();
      if (pos_ >= xml_.size() || (xml_[pos_] != '"' && xml_[pos_] != '\'')) {
        ParseFail(pos_, "expected a quoted attribute value");
      }
      const char quote = xml_[pos_++];
      const size_t value_start = pos_;
      const size_t close = xml_.find(quote, pos_);
      if (close == std::string_view::npos) ParseFail(value_start, "unterminated attribute");
      const std::string_view raw = xml_.substr(value_start, close - value_start);
      if (raw.find('<') != std::string_view::npos) {
        ParseFail(value_start, "'<' in attribute value");
      }
      pos_ = close + 1;
      if (!attrs.emplace(std::move(key), DecodeEntities(raw, value_start)).second) {
        ParseFail(attr_pos, "duplicate attribute");
      }
    }

    seen_root_ = true;
    OnOpen(name, attrs);
    if (self_closing) {
      OnClose(name);
    } else {
      stack_.push_back(name);
    }
  }

  void CloseTag() {
    const size_t tag_start = pos_;
    pos_ += 2;
    const std::string name = ReadName();
    SkipSpace();
    if (pos_ >= xml_.size() || xml_[pos_] != '>') ParseFail(pos_, "expected '>'");
    ++pos_;
    if (stack_.empty() || stack_.back() != name) {
      ParseFail(tag_start, fmt::format("mismatched closing tag </{}>", name));
    }
    stack_.pop_back();
    OnClose(name);
  }

  bool RootActive() const { return !stack_.empty() && skip_depth_ == 0; }
  bool TextActive() const { return text_depth_ > 0; }

  void EmitText(std::string_view text) {
    if (RootActive()) root_body_.Append(text);
    if (TextActive()) text_body_.Append(text);
  }

  void OnOpen(const std::string& name,
              const std::map<std::string, std::string>& attrs) {
    if (stack_.size() == 1 && (name == "DCT" || name == "DOCID")) ++skip_depth_;
    else if (skip_depth_ > 0) ++skip_depth_;
    if (name == "TEXT") {
      ++text_depth_;
      seen_text_element_ = true;
    } else if (text_depth_ > 0) {
      ++text_depth_;
    }

    if (name != "TIMEX3") return;
    if (timex_open_) {
      const size_t offset = TextActive() ? text_body_.length : root_body_.length;
      throw Error(ErrorKind::kSchema,
                  fmt::format("nested TIMEX3 at character offset {}", offset));
    }
    timex_open_ = true;
    auto fn = attrs.find("functionInDocument");
    timex_is_dct_ = fn != attrs.end() && fn->second == "CREATION_TIME";
    timex_root_start_ = RootActive() ? std::optional(root_body_.length) : std::nullopt;
    timex_text_start_ = TextActive() ? std::optional(text_body_.length) : std::nullopt;
    if (timex_is_dct_) {
      auto value = attrs.find("value");
      if (value != attrs.end()) dct_ = Date::Parse(value->second);
    }
  }

  void OnClose(const std::string& name) {
    if (name == "TIMEX3") {
      timex_open_ = false;
      if (!timex_is_dct_) {
        auto close = [](Capture& c, const std::optional<size_t>& start) {
          if (start && c.length > *start) c.spans.push_back({*start, c.length, {}});
        };
        close(root_body_, timex_root_start_);
        close(text_body_, timex_text_start_);
      }
    }
    if (skip_depth_ > 0) --skip_depth_;
    if (text_depth_ > 0) --text_depth_;
  }

  std::string_view xml_;
  size_t pos_ = 0;
  std::vector<std::string> stack_;
  bool seen_root_ = false;
  bool seen_text_element_ = false;
  int skip_depth_ = 0;
  int text_depth_ = 0;

  bool timex_open_ = false;
  bool timex_is_dct_ = false;
  std::optional<size_t> timex_root_start_;
  std::optional<size_t> timex_text_start_;
  std::optional<Date> dct_;

  Capture root_body_;
  Capture text_body_;
};

}  // namespace

Document ReadTimeMl(std::string_view xml, std::string id, std::string language) {
  Document doc = TimeMlScanner(xml).Run();
  doc.id = std::move(id);
  doc.language = std::move(language);
  NormalizeSpans(&doc);
  return doc;
}

}  // namespace teigo
