#pragma once

#include <iosfwd>

namespace pfl::cli {

// Exit codes: 0 success, 2 invalid input (usage, config, schema, domain), 3 numerical failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pfl::cli
