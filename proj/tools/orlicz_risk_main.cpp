#include "orlicz_risk/cli.hpp"

int main(int argc, char** argv) { return orlicz_risk::cli::run(argc, argv); }
