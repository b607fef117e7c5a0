#ifndef CVMEM_TOOLS_CLI_HPP
#define CVMEM_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace cvmem::cli {

enum ExitCode { Ok = 0, NumericFailure = 1, UsageError = 2, ValidationFailure = 3 };

/// Runs the command line `args` (without the program name). Reports go to
/// `out` unless an output file is requested, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace cvmem::cli

#endif
