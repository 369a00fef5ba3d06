// Copyright (c) 2026 The RouTEE developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace routee::app {

/// Host and user command-line client. `args` excludes the program name.
/// Exit code: 0 on success, the numeric protocol Status on protocol errors, 1 on local errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace routee::app
