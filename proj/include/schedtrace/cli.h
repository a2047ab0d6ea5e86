/*
 * Copyright (C) 2026 The Schedtrace Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SCHEDTRACE_CLI_H_
#define SCHEDTRACE_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace schedtrace {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitTraceError = 1;
inline constexpr int kExitConsistency = 2;
inline constexpr int kExitUsage = 3;

// Runs the tool. `args` excludes the program name. Paths given as "-" read
// from `in`; reports go to `out` unless an output directory is given, and
// diagnostics go to `err`.
//
//   analyze <trace>... --report {load|utilization|stats|timeline} ...
//           [--slot-width-us N] [--from-us N] [--to-us N] [--bins N]
//           [--lenient] [--format {text|csv|json}] [-o DIR]
//   validate <trace>... [--lenient]
//   generate <script> [-o DIR]
//   generate --seed N [--tasks N] [--runs N] [--max-gross-us N]
//            [--irq-probability P] [-o DIR]
int RunCli(const std::vector<std::string>& args,
           std::istream& in,
           std::ostream& out,
           std::ostream& err);

}  // namespace schedtrace

#endif  // SCHEDTRACE_CLI_H_
