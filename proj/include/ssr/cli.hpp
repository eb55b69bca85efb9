#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ssr {

// Exit codes shared by every subcommand:
//   0 success (for sequiv: the reductions are S-equivalent)
//   1 negative verdict (sequiv) or catalog mismatch
//   2 parse or contract error
//   3 non-integral input
//   4 descent loop did not terminate (cap exceeded / periodic)
//   5 enumeration cap exceeded
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace ssr
