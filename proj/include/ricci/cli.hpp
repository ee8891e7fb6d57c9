#ifndef RICCI_CLI_HPP
#define RICCI_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace ricci {

/// Entry point of the command-line tool, callable in-process.
/// Commands: eig, grow, alpha, limit, criterion, split.
/// Exit codes: 0 success, 2 input error, 3 numerical failure,
/// 4 precondition violation.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

/// Parses a k specification: comma-separated integers or inclusive "a..b"
/// ranges; scientific literals such as 1e4 are accepted. Returns a sorted,
/// de-duplicated list.
std::vector<long long> parse_k_spec(const std::string& spec);

}  // namespace ricci

#endif
