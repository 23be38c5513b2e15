#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cooploss::cli {

/// Exit codes: 0 success, 1 domain/parse/io error (one-line JSON on `err`),
/// 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cooploss::cli
