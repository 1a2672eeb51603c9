// Copyright 2026 The TGS Authors
// SPDX-License-Identifier: Apache-2.0

#include "tgs/cli.hpp"

int main(int argc, char** argv) { return tgs::cli::main(argc, argv); }
