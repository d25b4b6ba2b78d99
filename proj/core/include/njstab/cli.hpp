#pragma once

namespace njstab {

/// Command line entry point (the `njstab` tool is a thin wrapper so tests
/// can drive subcommands in-process).
///
/// Subcommands:
///   run <config>        full pipeline, emits a scenario report
///   defect <config>     defect statistics and theta fit only
///   correct <config>    corrector diagnostics only
///   constants <variant> key=value...   prints certificate bound constants
///
/// Common flags: --format json|csv|text, --out <path>, --seed <u64>
/// (overrides the config seed), --quiet.
///
/// Exit codes: 0 all checks passed, 1 a check failed, 2 configuration
/// error, 3 runtime failure (overflow, I/O).
int cli_main(int argc, const char* const* argv);

}  // namespace njstab
