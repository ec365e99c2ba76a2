#include "ionnode/cli.hpp"

int main(int argc, char** argv) { return ionnode::cli::main(argc, argv); }
