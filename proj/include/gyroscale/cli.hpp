// Command-line entry point: check / run / sweep / report subcommands.
// Exit codes: 0 all gates pass, 1 a gate failed, 2 usage or config error.
#ifndef GYROSCALE_CLI
#define GYROSCALE_CLI

namespace gyroscale {

int run_cli(int argc, char** argv);

}  // namespace gyroscale

#endif
