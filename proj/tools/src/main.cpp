#include "poisson_chaos/cli/commands.hpp"

int main(int argc, char** argv) { return poisson_chaos::cli::main_entry(argc, argv); }
