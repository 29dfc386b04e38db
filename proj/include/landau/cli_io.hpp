#ifndef LANDAU_CLI_IO_HPP
#define LANDAU_CLI_IO_HPP

#include <string>
#include <vector>

namespace landau {

// Front door for the landau-res tool. Exit codes: 0 success, 1 validation
// error, 2 numerical failure; machine-readable error JSON on stderr.
int run(const std::vector<std::string>& argv);

}  // namespace landau

#endif
