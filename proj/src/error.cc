// Copyright 2026 The scnforge Authors
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

#include "scnforge/error.h"

namespace scnforge {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput:
      return "invalid-input";
    case ErrorCode::kDegenerateGeometry:
      return "degenerate-geometry";
    case ErrorCode::kInvalidTrack:
      return "invalid-track";
    case ErrorCode::kParse:
      return "parse-error";
    case ErrorCode::kSchema:
      return "schema-error";
    case ErrorCode::kUnsupportedVersion:
      return "unsupported-version";
    case ErrorCode::kExportRefused:
      return "export-refused";
    case ErrorCode::kInternal:
      return "internal-error";
  }
  return "unknown";
}

}  // namespace scnforge
