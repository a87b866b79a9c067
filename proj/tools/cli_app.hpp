#pragma once

// Placeholder during bring-up; the full command set lives here.

namespace eigenweight::cli {

int run(int, char**);

inline int run(int, char**) { return 0; }

}  // namespace eigenweight::cli
