#include "selfsim/cli.hpp"

int main(int argc, char** argv) { return selfsim::cli::main_entry(argc, argv); }
