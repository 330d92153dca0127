#include <vector>

#include "sc/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return sc::run_cli(args);
}
