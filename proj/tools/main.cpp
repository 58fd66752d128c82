#include "isoflux/cli.hpp"

int main(int argc, char** argv) { return isoflux::run_cli(argc, argv); }
