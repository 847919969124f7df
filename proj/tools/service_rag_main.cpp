#include <iostream>
#include <string>
#include <vector>

#include "service_rag/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return service_rag::cli::run(args, std::cout, std::cerr);
}
