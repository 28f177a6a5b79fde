// Copyright The frag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace frag {

enum class ErrorCode {
    invalid_argument,
    dimension_mismatch,
    bad_magic,
    bad_version,
    truncated,
    non_finite,
    io_failure,
    unsupported_format,
    degenerate_input,
    empty_mask,
    zero_norm,
};

constexpr std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::bad_magic: return "bad_magic";
    case ErrorCode::bad_version: return "bad_version";
    case ErrorCode::truncated: return "truncated";
    case ErrorCode::non_finite: return "non_finite";
    case ErrorCode::io_failure: return "io_failure";
    case ErrorCode::unsupported_format: return "unsupported_format";
    case ErrorCode::degenerate_input: return "degenerate_input";
    case ErrorCode::empty_mask: return "empty_mask";
    case ErrorCode::zero_norm: return "zero_norm";
    }
    return "unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI's error JSON) can tell them apart without parsing text.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline void require(bool cond, ErrorCode code, const std::string& what)
{
    if (!cond)
        throw Error(code, what);
}

} // namespace frag
