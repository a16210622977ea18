#include <gyroscale/cli.hpp>

int main(int argc, char** argv) { return gyroscale::run_cli(argc, argv); }
