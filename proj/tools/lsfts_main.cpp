#include <string>
#include <vector>

#include "lsfts/cli.hpp"

int main(int argc, char** argv) {
    return lsfts::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
