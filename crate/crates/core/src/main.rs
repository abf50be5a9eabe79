// Copyright (c) 2026, The linnik Authors
// SPDX-License-Identifier: Apache-2.0

fn main() {
    std::process::exit(linnik::cli::run(std::env::args_os()));
}
