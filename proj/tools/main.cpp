// SPDX-License-Identifier: Apache-2.0
#include "drmimo/harness.hpp"

int main(int argc, char** argv) { return drmimo::cli_main(argc, argv); }
