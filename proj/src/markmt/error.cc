/* Copyright 2026 The markmt Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "markmt/error.h"

namespace markmt {

const char *error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kMalformedMarkup: return "malformed_markup";
    case ErrorCode::kDecode: return "decode_error";
    case ErrorCode::kNestingUnsupported: return "nesting_unsupported";
    case ErrorCode::kLocationStale: return "location_stale";
    case ErrorCode::kSpanConflict: return "span_conflict";
    case ErrorCode::kEmptyCorpus: return "empty_corpus";
    case ErrorCode::kDimensionMismatch: return "dimension_mismatch";
    case ErrorCode::kIndexOutOfBounds: return "index_out_of_bounds";
    case ErrorCode::kUnsupportedPair: return "unsupported_pair";
    case ErrorCode::kBackendUnavailable: return "backend_unavailable";
    case ErrorCode::kTimeout: return "timeout";
    case ErrorCode::kAuth: return "auth_error";
    case ErrorCode::kProtocol: return "protocol_error";
    case ErrorCode::kEmptyInput: return "empty_input";
    case ErrorCode::kTooFewSamples: return "too_few_samples";
    case ErrorCode::kSchema: return "schema_error";
    case ErrorCode::kMissingHypotheses: return "missing_hypotheses";
    case ErrorCode::kInsufficientSystems: return "insufficient_systems";
    case ErrorCode::kUnknownTask: return "unknown_task";
    case ErrorCode::kUnknownLabel: return "unknown_label";
    case ErrorCode::kIo: return "io_error";
  }
  return "unknown";
}

}  // namespace markmt
