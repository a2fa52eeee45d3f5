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

// Umbrella header.

#ifndef GPG_GPG_HPP
#define GPG_GPG_HPP

#include "gpg/ast.hpp"
#include "gpg/constraint_solver.hpp"
#include "gpg/dataflow.hpp"
#include "gpg/demo_externals.hpp"
#include "gpg/diagnostics.hpp"
#include "gpg/driver.hpp"
#include "gpg/emitter.hpp"
#include "gpg/extension.hpp"
#include "gpg/first_follow.hpp"
#include "gpg/grammar.hpp"
#include "gpg/gts_parser.hpp"
#include "gpg/interpreter.hpp"
#include "gpg/lexer.hpp"
#include "gpg/parser.hpp"
#include "gpg/printer.hpp"
#include "gpg/sites.hpp"
#include "gpg/source.hpp"
#include "gpg/typecheck.hpp"
#include "gpg/typesystem.hpp"

#endif  // GPG_GPG_HPP
