#pragma once

namespace sobmom {
const char* version();
}
