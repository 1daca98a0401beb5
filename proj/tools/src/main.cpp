// SPDX-License-Identifier: Apache-2.0
#include "anchorsec/cli.hpp"

int main(int argc, char** argv) { return anchorsec::cli_main(argc, argv); }
