#include "gfa/cli.hpp"

int main(int argc, char** argv) { return gfa::run_cli(argc, argv); }
