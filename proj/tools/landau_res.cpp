#include <string>
#include <vector>

#include "landau/cli_io.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return landau::run(args);
}
