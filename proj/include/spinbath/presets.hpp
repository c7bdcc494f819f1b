#pragma once

#include <cstdint>
#include <string>

namespace spinbath {

// Desk-scale scenario presets:
//   fig1: bath correlation functions; CCE-order convergence and the field
//         orientation sweep with stretched-exponential fits.
//   fig2: quantum vs gaussian coherence at fields near and far from the CT,
//         with 1/e times per sequence.
//   fig3: CPMG-100 noise spectroscopy; prediction quality near and far from
//         the CT plus the extracted-vs-computed spectrum table.
void run_scenario_preset(const std::string& name, std::uint64_t seed,
                         const std::string& out_dir, int threads);

}  // namespace spinbath
