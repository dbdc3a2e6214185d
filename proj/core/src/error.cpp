//
// Project forge - Copyright 2026 The forge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "forge/error.hpp"

namespace forge {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
  case ErrorCode::kUnbalancedRing:
    return "UnbalancedRing";
  case ErrorCode::kUnbalancedParen:
    return "UnbalancedParen";
  case ErrorCode::kValenceError:
    return "ValenceError";
  case ErrorCode::kUnknownToken:
    return "UnknownToken";
  case ErrorCode::kLengthMismatch:
    return "LengthMismatch";
  case ErrorCode::kUnbalancedMarker:
    return "UnbalancedMarker";
  case ErrorCode::kDummyAtomPresent:
    return "DummyAtomPresent";
  case ErrorCode::kDegenerateRange:
    return "DegenerateRange";
  case ErrorCode::kEmptyRemainder:
    return "EmptyRemainder";
  case ErrorCode::kNoAttachment:
    return "NoAttachment";
  case ErrorCode::kTooFewSamples:
    return "TooFewSamples";
  case ErrorCode::kNoMatch:
    return "NoMatch";
  case ErrorCode::kLabelMismatch:
    return "LabelMismatch";
  case ErrorCode::kMalformedCsv:
    return "MalformedCsv";
  case ErrorCode::kGrammarError:
    return "GrammarError";
  case ErrorCode::kInvalidSmiles:
    return "InvalidSmiles";
  case ErrorCode::kMalformedValue:
    return "MalformedValue";
  case ErrorCode::kEmptySource:
    return "EmptySource";
  case ErrorCode::kEmptyBuffer:
    return "EmptyBuffer";
  case ErrorCode::kInvalidArgument:
    return "InvalidArgument";
  case ErrorCode::kIoError:
    return "IoError";
  }
  return "Unknown";
}

namespace {

std::string format_message(ErrorCode code, const std::string &message,
                           std::optional<std::size_t> offset) {
  std::string out(error_code_name(code));
  out += ": ";
  out += message;
  if (offset) {
    out += " (at ";
    out += std::to_string(*offset);
    out += ')';
  }
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string &message,
             std::optional<std::size_t> offset)
    : std::runtime_error(format_message(code, message, offset)), code_(code),
      offset_(offset) { }

}  // namespace forge
