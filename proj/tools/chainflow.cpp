// Copyright 2026 The chainflow Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "chainflow/cli.hpp"

int main(int argc, char** argv) { return chainflow::run_cli(argc, argv, std::cout, std::cerr); }
