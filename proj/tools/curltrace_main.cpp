#include "curltrace/runner.hpp"

int main(int argc, char** argv) { return curltrace::cli_main(argc, argv); }
