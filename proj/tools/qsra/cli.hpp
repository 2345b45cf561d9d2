#pragma once

#include <ostream>

namespace qsra::cli {

// Exit status: 0 success, 1 simulation failure, 2 invalid input or usage.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qsra::cli
