// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>

#include "doa/estimators.hpp"
#include "doa/montecarlo.hpp"

namespace doa {

// Locale-independent shortest round-trip formatting; "inf"/"-inf"/"nan" for
// the non-finite sentinels.
std::string format_double(double value);

// Header: angle_deg,value,value_db
std::string spectrum_csv(const Spectrum& spectrum);
void write_spectrum_csv(const std::string& path, const Spectrum& spectrum);

// Header: snr_db,estimator,preprocessing,rmse_deg,resolution_rate,
//         mean_spurious_db,runs
std::string sweep_csv(const MonteCarloReport& report);
void write_sweep_csv(const std::string& path, const MonteCarloReport& report);

// Standalone diagnostic plots; no external plotting dependency.
void write_spectrum_svg(const std::string& path, const Spectrum& spectrum,
                        std::span<const double> truth_angles_deg, const std::string& title);
void write_sweep_svg(const std::string& path, const MonteCarloReport& report,
                     const std::string& title);

} // namespace doa
