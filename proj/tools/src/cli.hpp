#pragma once

#include <iosfwd>

namespace gfl::cli {

/* Runs the `gfl` command line. Data goes to `out` (or to files named by
 * flags), diagnostics to `err`. Returns 0 on success, 1 on usage errors and
 * 2 on data or convergence failures. */
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace gfl::cli
