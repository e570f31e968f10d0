#pragma once

#include <stdexcept>
#include <string>

namespace pqt {

/// oqt: purely unitary evolution. pqt: collapse engine armed.
enum class RunMode { oqt, pqt };

inline std::string mode_name(RunMode m) { return m == RunMode::oqt ? "oqt" : "pqt"; }

inline RunMode parse_mode(const std::string& s) {
    if (s == "oqt") return RunMode::oqt;
    if (s == "pqt") return RunMode::pqt;
    throw std::invalid_argument("mode must be 'oqt' or 'pqt', got '" + s + "'");
}

}  // namespace pqt
