#include "wentzell/cli/commands.hpp"

int main(int argc, char** argv) { return wentzell::cli::run_cli(argc, argv); }
