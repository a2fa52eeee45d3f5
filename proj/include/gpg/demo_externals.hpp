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

// Built-in demo bindings for the arithmetic-evaluator externals
// (strToInt, value, zero, one, neg, add, mul) over the Int/String/Environment
// types. Harness-level code: the interpreter core knows nothing about these.

#ifndef GPG_DEMO_EXTERNALS_HPP
#define GPG_DEMO_EXTERNALS_HPP

#include <any>
#include <cstdint>
#include <map>
#include <memory>
#include <string>

#include "gpg/interpreter.hpp"

namespace gpg::demo {

using Environment = std::map<std::string, std::int64_t>;

inline RuntimeValue makeEnvironment(Environment env) {
  return RuntimeValue::ofHost(std::make_shared<Environment>(std::move(env)), "Environment");
}

inline const Environment& environmentOf(const RuntimeValue& value) {
  if (const auto* ptr = std::any_cast<std::shared_ptr<Environment>>(&value.asHost()))
    return **ptr;
  throw HostError("expected an environment value");
}

inline RuntimeValue intValue(std::int64_t v) { return RuntimeValue::ofInt(v, "Int"); }

inline std::int64_t intOf(const RuntimeValue& v) {
  if (!v.isInt()) throw HostError("expected an Int value");
  return v.asInt();
}

// The seven externals of the arithmetic example.
inline void bindArithExternals(ExternalFunctionTable& table) {
  table.bind("strToInt", [](const std::vector<RuntimeValue>& args) {
    const std::string& text = args.at(0).asString();
    try {
      return std::vector<RuntimeValue>{intValue(std::stoll(text))};
    } catch (const std::exception&) {
      throw HostError("strToInt: '" + text + "' is not a number");
    }
  });
  table.bind("value", [](const std::vector<RuntimeValue>& args) {
    const Environment& env = environmentOf(args.at(0));
    const std::string& name = args.at(1).asString();
    auto it = env.find(name);
    if (it == env.end()) throw HostError("value: variable '" + name + "' is not defined");
    return std::vector<RuntimeValue>{intValue(it->second)};
  });
  table.bind("zero", [](const std::vector<RuntimeValue>&) {
    return std::vector<RuntimeValue>{intValue(0)};
  });
  table.bind("one", [](const std::vector<RuntimeValue>&) {
    return std::vector<RuntimeValue>{intValue(1)};
  });
  table.bind("neg", [](const std::vector<RuntimeValue>& args) {
    return std::vector<RuntimeValue>{intValue(-intOf(args.at(0)))};
  });
  table.bind("add", [](const std::vector<RuntimeValue>& args) {
    return std::vector<RuntimeValue>{intValue(intOf(args.at(0)) + intOf(args.at(1)))};
  });
  table.bind("mul", [](const std::vector<RuntimeValue>& args) {
    return std::vector<RuntimeValue>{intValue(intOf(args.at(0)) * intOf(args.at(1)))};
  });
}

}  // namespace gpg::demo

#endif  // GPG_DEMO_EXTERNALS_HPP
