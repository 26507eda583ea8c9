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

#include "dlprep/inject/repack.h"

#include "dlprep/util/process.h"

namespace dlprep::inject {

RepackResult Repack(const std::filesystem::path& tree, const std::filesystem::path& artifact,
                    const std::string& command_template) {
  if (command_template.find_first_not_of(" \t") == std::string::npos)
    throw HookError(HookError::Code::kMissing,
                    "no repack command configured; pass --repack-cmd or set repack_cmd in the "
                    "config, e.g. 'apktool b {in} -o {out}'");
  RepackResult r;
  r.artifact = artifact;
  r.command = util::ExpandTemplate(command_template,
                                   {{"in", tree.string()}, {"out", artifact.string()}});
  auto run = util::RunShell(r.command);
  r.stdout_text = std::move(run.stdout_text);
  r.stderr_text = std::move(run.stderr_text);
  if (run.exit_code != 0)
    throw HookError(HookError::Code::kFailed,
                    "repack command exited with status " + std::to_string(run.exit_code),
                    r.stderr_text);
  if (!std::filesystem::exists(artifact))
    throw HookError(HookError::Code::kFailed,
                    "repack command succeeded but produced no " + artifact.string(), r.stderr_text);
  return r;
}

}  // namespace dlprep::inject
