#ifndef ISOFLUX_CLI_HPP_
#define ISOFLUX_CLI_HPP_

namespace isoflux {

/// Subcommands: field, optimize, verify, hc1, phase. Returns 0 on success,
/// 2 on verification failure, 1 on usage or runtime errors.
int run_cli(int argc, const char* const* argv);

}  // namespace isoflux

#endif  // ISOFLUX_CLI_HPP_
