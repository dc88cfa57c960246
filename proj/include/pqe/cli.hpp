#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pqe {

/// Runs the pqeverify command line. `args` excludes the program name.
/// Returns 0 (correct / success), 1 (refuted), 2 (resource limit) or
/// 3 (usage or parse error).
int run_cli(const std::vector<std::string> &args, std::ostream &out,
            std::ostream &err);

} // namespace pqe
