#pragma once

// Module objects built from a resolved (validated, defaults filled) config.

#include <Eigen/Dense>

#include "tvcqed/cli/scenario.hpp"
#include "tvcqed/open_system.hpp"
#include "tvcqed/plasmon.hpp"
#include "tvcqed/trimode.hpp"

namespace tvcqed::cli::detail {

ModulationSchedule schedule_from(const json& j);
cplx complex_from(const json& j);
TrimodeParams trimode_from(const json& p);
TrimodeState state_from(const json& init);
RelaxationRates rates_from(const json& r);
NoiseKind noise_from(const std::string& name);
CavityGeometry geometry_from(const json& p);
Eigen::Vector3d vector3_from(const json& j);
Parity parity_from(const std::string& name);
std::vector<double> time_grid(const json& p, int samples);

}  // namespace tvcqed::cli::detail
