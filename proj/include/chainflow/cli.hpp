// Copyright 2026 The chainflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>

namespace chainflow {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNoAssignment = 3;
inline constexpr int kExitNumerical = 4;

/// Entry point of the `chainflow` tool; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace chainflow
