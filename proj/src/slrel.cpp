// Compiles the umbrella header as its own translation unit so the header-only
// library is checked for self-containment on every build.
#include "slrel/slrel.hpp"
