//
// Project forge - Copyright 2026 The forge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FORGE_ERROR_HPP_
#define FORGE_ERROR_HPP_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace forge {

enum class ErrorCode {
  kUnbalancedRing,
  kUnbalancedParen,
  kValenceError,
  kUnknownToken,
  kLengthMismatch,
  kUnbalancedMarker,
  kDummyAtomPresent,
  kDegenerateRange,
  kEmptyRemainder,
  kNoAttachment,
  kTooFewSamples,
  kNoMatch,
  kLabelMismatch,
  kMalformedCsv,
  kGrammarError,
  kInvalidSmiles,
  kMalformedValue,
  kEmptySource,
  kEmptyBuffer,
  kInvalidArgument,
  kIoError,
};

std::string_view error_code_name(ErrorCode code);

/// Domain error raised by every forge module. `offset()` carries the byte
/// offset for lexer/parser errors and the line number for CSV errors.
class Error: public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &message,
        std::optional<std::size_t> offset = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> offset() const noexcept { return offset_; }

private:
  ErrorCode code_;
  std::optional<std::size_t> offset_;
};

}  // namespace forge

#endif  // FORGE_ERROR_HPP_
