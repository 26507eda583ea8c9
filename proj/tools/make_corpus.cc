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

// Writes the synthetic evaluation corpus and its ground truth.
//
//   make_corpus <dir> [seed]

#include <cstdlib>
#include <iostream>

#include "support/corpus.h"

int main(int argc, char** argv) {
  if (argc < 2 || argc > 3) {
    std::cerr << "usage: make_corpus <dir> [seed]\n";
    return 64;
  }
  uint64_t seed = argc == 3 ? std::strtoull(argv[2], nullptr, 10) : 7;
  auto corpus = dlprep::testing::BuildCorpus(argv[1], seed);
  std::cout << corpus.apps.size() << " apps in " << corpus.apps_dir.string() << "\n";
  return 0;
}
