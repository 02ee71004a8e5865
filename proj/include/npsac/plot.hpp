#pragma once

#include <span>
#include <string>

#include "npsac/eval.hpp"

namespace npsac {

/// Precision, recall, F1 and F2 against threshold as a standalone SVG.
std::string render_sweep_svg(std::span<const SweepRow> rows, const std::string& title);

}  // namespace npsac
