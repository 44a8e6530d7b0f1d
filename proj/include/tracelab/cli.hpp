#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tracelab {

// Exit codes: 0 success/accepted, 1 parse error, 2 well-formedness violation,
// 3 budget exhausted with zero traces, 4 refuted with witness, 5 oracle or
// bounds insufficiency, 64 usage error.
int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tracelab
