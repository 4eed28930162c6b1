#pragma once

#include <exception>
#include <ostream>

#include "pxp/manifest.hpp"

namespace pxp {

namespace exit_code {
inline constexpr int success = 0;
inline constexpr int validation = 2;
inline constexpr int numerical = 3;
inline constexpr int capacity = 4;
}  // namespace exit_code

/// Maps a pxp error (or any other exception) to the CLI exit status.
int exit_code_for(const std::exception& error) noexcept;

/// Runs one experiment and writes its artifacts plus manifest.json into
/// manifest.output_dir (created if needed). `manifest.outputs` and the wall-clock
/// field are filled in. Files written by a failed run are removed before the
/// error propagates. basis-info without an output directory only prints.
void run_experiment(RunManifest& manifest, std::ostream& out, std::ostream& log);

/// run_experiment with errors reported on `log` and converted to an exit status.
int run_experiment_status(RunManifest& manifest, std::ostream& out, std::ostream& log) noexcept;

}  // namespace pxp
