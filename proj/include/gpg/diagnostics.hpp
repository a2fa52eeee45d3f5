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

// Diagnostic records, stable error codes, sorting and rendering.

#ifndef GPG_DIAGNOSTICS_HPP
#define GPG_DIAGNOSTICS_HPP

#include <algorithm>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "gpg/source.hpp"

namespace gpg {

enum class Severity { Warning, Error };

namespace diag {
// Stable diagnostic codes. Messages may evolve; codes do not.
inline constexpr std::string_view Syntax = "E-SYNTAX";

inline constexpr std::string_view GrammarUndefinedSymbol = "E-GRAM-UNDEF";
inline constexpr std::string_view GrammarDuplicateRule = "E-GRAM-DUP-RULE";
inline constexpr std::string_view GrammarDuplicateLabel = "E-GRAM-DUP-LABEL";
inline constexpr std::string_view GrammarCharRange = "E-GRAM-RANGE";
inline constexpr std::string_view GrammarFragment = "E-GRAM-FRAGMENT";
inline constexpr std::string_view GrammarBadReference = "E-GRAM-REF";

inline constexpr std::string_view UnknownSite = "E-SITE-UNKNOWN";
inline constexpr std::string_view AtOnToken = "E-SITE-AT-TOKEN";
inline constexpr std::string_view MultipleAt = "E-SITE-MULTIPLE-AT";
inline constexpr std::string_view AtNotACall = "E-SITE-AT-CALL";

inline constexpr std::string_view DuplicateFunction = "E-NAME-DUP-FUNC";
inline constexpr std::string_view DuplicateAttribute = "E-NAME-DUP-ATTR";
inline constexpr std::string_view UnknownToken = "E-NAME-UNKNOWN-TOKEN";
inline constexpr std::string_view FunctionPlacement = "E-NAME-TF-RULE";
inline constexpr std::string_view AtTarget = "E-NAME-AT-TARGET";
inline constexpr std::string_view TranslationCall = "E-NAME-TF-CALL";

inline constexpr std::string_view IncompatibleTypes = "E-TYPE-INCOMPAT";
inline constexpr std::string_view AmbiguousType = "E-TYPE-AMBIG";
inline constexpr std::string_view NoConstraintsNoTop = "E-TYPE-NOTOP";
inline constexpr std::string_view ArityMismatch = "E-ARITY";
inline constexpr std::string_view TupleArityMismatch = "E-TYPE-TUPLE-ARITY";
inline constexpr std::string_view UnknownType = "E-TYPE-UNKNOWN";
inline constexpr std::string_view InferenceConflict = "E-TYPE-INFER-CONFLICT";

inline constexpr std::string_view Uninitialized = "E-FLOW-UNINIT";
inline constexpr std::string_view OutputUninitialized = "E-FLOW-OUTPUT";

inline constexpr std::string_view TsSyntax = "E-TS-SYNTAX";
inline constexpr std::string_view TsDangling = "E-TS-DANGLING";
inline constexpr std::string_view TsCycle = "E-TS-CYCLE";
inline constexpr std::string_view TsUndeclared = "E-TS-UNDECLARED";
inline constexpr std::string_view TsDuplicate = "E-TS-DUP";

inline constexpr std::string_view Unsupported = "E-EMIT-UNSUPPORTED";
}  // namespace diag

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;
  std::string message;
  std::string file;
  std::uint32_t line = 0;
  std::uint32_t column = 0;
  std::uint32_t length = 0;
};

// Collects diagnostics for one source file, resolving spans to line/column.
class DiagnosticSink {
public:
  DiagnosticSink(const SourceText& source, std::vector<Diagnostic>& out)
      : source_(&source), out_(&out) {}

  void report(Severity severity, std::string_view code, Span span, std::string message) {
    Diagnostic d;
    d.severity = severity;
    d.code = std::string(code);
    d.message = std::move(message);
    d.file = source_->name();
    LineCol lc = source_->locate(span.offset);
    d.line = lc.line;
    d.column = lc.column;
    d.length = span.length;
    // Identical reports (e.g. one action folded onto several control flow
    // edges) collapse to a single diagnostic.
    for (const Diagnostic& prev : *out_) {
      if (prev.line == d.line && prev.column == d.column && prev.code == d.code &&
          prev.message == d.message && prev.file == d.file)
        return;
    }
    out_->push_back(std::move(d));
  }

  void error(std::string_view code, Span span, std::string message) {
    report(Severity::Error, code, span, std::move(message));
  }

  void warning(std::string_view code, Span span, std::string message) {
    report(Severity::Warning, code, span, std::move(message));
  }

  const SourceText& source() const { return *source_; }
  std::vector<Diagnostic>& diagnostics() { return *out_; }

private:
  const SourceText* source_;
  std::vector<Diagnostic>* out_;
};

inline bool hasErrors(const std::vector<Diagnostic>& diags) {
  return std::any_of(diags.begin(), diags.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

inline void sortDiagnostics(std::vector<Diagnostic>& diags) {
  std::stable_sort(diags.begin(), diags.end(), [](const Diagnostic& a, const Diagnostic& b) {
    return std::tie(a.file, a.line, a.column) < std::tie(b.file, b.line, b.column);
  });
}

// "<file>:<line>:<col>: <severity>[<code>]: <message>"
inline std::string renderDiagnostic(const Diagnostic& d) {
  std::ostringstream os;
  os << d.file << ':' << d.line << ':' << d.column << ": "
     << (d.severity == Severity::Error ? "error" : "warning") << '[' << d.code
     << "]: " << d.message;
  return os.str();
}

inline void renderDiagnostics(std::ostream& os, const std::vector<Diagnostic>& diags) {
  for (const Diagnostic& d : diags) os << renderDiagnostic(d) << '\n';
}

}  // namespace gpg

#endif  // GPG_DIAGNOSTICS_HPP
