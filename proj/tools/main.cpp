#include "vbsim/cli.hpp"

int main(int argc, char** argv) { return vbsim::cli::cli_main(argc, argv); }
