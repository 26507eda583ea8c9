// Copyright 2026 The dlprep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DLPREP_TESTS_SUPPORT_TESTDATA_H_
#define DLPREP_TESTS_SUPPORT_TESTDATA_H_

#include <filesystem>
#include <string>
#include <string_view>

#include "dlprep/smali/ast.h"
#include "dlprep/smali/parser.h"
#include "dlprep/smali/tree.h"

namespace dlprep::testing {

inline std::filesystem::path TestDataPath(std::string_view relative) {
  return std::filesystem::path(DLPREP_TEST_DATA_DIR) / relative;
}

inline std::string ReadTestData(std::string_view relative) {
  return smali::ReadFileBytes(TestDataPath(relative));
}

inline smali::SmaliUnit ParseTestData(std::string_view relative) {
  return smali::ParseUnit(ReadTestData(relative));
}

// Index of the first instruction in |method| whose text contains |needle|.
inline size_t FindInstruction(const smali::SmaliMethod& method, std::string_view needle) {
  for (size_t i = 0; i < method.instructions.size(); ++i)
    if (method.instructions[i].raw_text.find(needle) != std::string::npos) return i;
  return method.instructions.size();
}

inline const smali::SmaliMethod* FindMethod(const smali::SmaliUnit& unit,
                                            std::string_view signature) {
  for (const auto& m : unit.methods)
    if (m.Signature() == signature) return &m;
  return nullptr;
}

}  // namespace dlprep::testing

#endif  // DLPREP_TESTS_SUPPORT_TESTDATA_H_
