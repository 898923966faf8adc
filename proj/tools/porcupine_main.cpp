#include "porcupine/cli.hpp"

int main(int argc, char** argv) { return porcupine::cli::run(argc, argv); }
