// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace anchorsec {

/// Entry point of the simulator command line. Returns 0 on success, 2 for
/// usage errors and 1 when the experiment itself fails.
int cli_main(int argc, const char* const* argv);

}  // namespace anchorsec
