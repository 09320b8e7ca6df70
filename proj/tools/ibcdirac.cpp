// Copyright 2026 The ibcdirac Authors
// SPDX-License-Identifier: Apache-2.0

#include "ibc/cli.hpp"

int main(int argc, char** argv) { return ibc::cli::main(argc, argv); }
