#pragma once

namespace qsemis {

inline constexpr const char* kArtifactName = "qsemis";
inline constexpr const char* kArtifactVersion = "0.1.0";

// Version of the JSON / CSV document layout emitted by the CLI.
inline constexpr int kSchemaVersion = 1;

}  // namespace qsemis
