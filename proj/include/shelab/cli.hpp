#pragma once

#include <ostream>

namespace shelab {

/// Exit codes: 0 ran to completion (check outcomes live in the summary), 2 configuration error,
/// 3 numerical fault.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace shelab
