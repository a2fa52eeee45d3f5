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

// Source text handling: byte spans and line/column resolution.

#ifndef GPG_SOURCE_HPP
#define GPG_SOURCE_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gpg {

struct Span {
  std::uint32_t offset = 0;
  std::uint32_t length = 0;

  Span() = default;
  Span(std::uint32_t off, std::uint32_t len) : offset(off), length(len) {}

  std::uint32_t end() const { return offset + length; }

  // Smallest span covering both.
  Span merge(const Span& other) const {
    std::uint32_t lo = offset < other.offset ? offset : other.offset;
    std::uint32_t hi = end() > other.end() ? end() : other.end();
    return Span(lo, hi - lo);
  }
};

struct LineCol {
  std::uint32_t line = 1;    // 1-based
  std::uint32_t column = 1;  // 1-based
};

class SourceText {
public:
  SourceText() = default;
  SourceText(std::string name, std::string text)
      : name_(std::move(name)), text_(std::move(text)) {
    lineStarts_.push_back(0);
    for (std::size_t i = 0; i < text_.size(); ++i) {
      if (text_[i] == '\n') lineStarts_.push_back(static_cast<std::uint32_t>(i + 1));
    }
  }

  const std::string& name() const { return name_; }
  const std::string& text() const { return text_; }
  std::size_t size() const { return text_.size(); }

  std::string_view slice(Span span) const {
    if (span.offset >= text_.size()) return {};
    std::size_t len = span.length;
    if (span.offset + len > text_.size()) len = text_.size() - span.offset;
    return std::string_view(text_).substr(span.offset, len);
  }

  LineCol locate(std::uint32_t offset) const {
    // Binary search for the last line start <= offset.
    std::size_t lo = 0, hi = lineStarts_.size();
    while (lo + 1 < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (lineStarts_[mid] <= offset)
        lo = mid;
      else
        hi = mid;
    }
    LineCol lc;
    lc.line = static_cast<std::uint32_t>(lo + 1);
    lc.column = offset - lineStarts_[lo] + 1;
    return lc;
  }

private:
  std::string name_;
  std::string text_;
  std::vector<std::uint32_t> lineStarts_;
};

}  // namespace gpg

#endif  // GPG_SOURCE_HPP
