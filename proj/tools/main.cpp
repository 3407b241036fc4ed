#include "commands.hpp"

int main(int argc, char** argv) { return darktripod::cli::run(argc, argv); }
