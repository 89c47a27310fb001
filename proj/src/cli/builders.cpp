#include "builders.hpp"

#include "tvcqed/numerics/ode.hpp"

namespace tvcqed::cli::detail {

ModulationSchedule schedule_from(const json& j) {
    const std::string type = j.at("type");
    if (type == "constant") return ModulationSchedule::constant(j.at("value").get<double>());
    if (type == "sinusoidal") {
        return ModulationSchedule::sinusoidal(j.at("mean").get<double>(), j.at("depth").get<double>(),
                                              j.at("mod_frequency").get<double>(), j.at("phase").get<double>());
    }
    return ModulationSchedule::linear_sweep(j.at("rate").get<double>(), j.at("offset").get<double>());
}

cplx complex_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

TrimodeParams trimode_from(const json& p) {
    TrimodeParams t;
    t.omega_a = schedule_from(p.at("omega_a"));
    t.omega_b = schedule_from(p.at("omega_b"));
    t.transition = schedule_from(p.at("transition"));
    t.rabi_a = complex_from(p.at("rabi_a"));
    t.rabi_b = complex_from(p.at("rabi_b"));
    t.target = p.at("target") == "atom" ? ModulationTarget::atom : ModulationTarget::cavity;
    t.harmonic_order = p.at("harmonic_order");
    return t;
}

TrimodeState state_from(const json& init) {
    return {complex_from(init.at("c000")), complex_from(init.at("c001")), complex_from(init.at("c100")),
            complex_from(init.at("c010"))};
}

RelaxationRates rates_from(const json& r) {
    return {r.at("gamma"), r.at("gamma_el"), r.at("mu_a"), r.at("mu_b"), r.at("temperature_atom"),
            r.at("temperature_em")};
}

NoiseKind noise_from(const std::string& name) {
    if (name == "population_preserving") return NoiseKind::population_preserving;
    if (name == "two_level_T1T2") return NoiseKind::two_level_T1T2;
    return NoiseKind::zero_temperature;
}

CavityGeometry geometry_from(const json& p) {
    CavityGeometry g;
    g.k = p.at("k");
    g.area = p.at("area");
    g.half_height = schedule_from(p.at("half_height"));
    g.gap_permittivity = p.at("gap_permittivity");
    g.hbar = p.at("hbar");
    if (!p.at("speed_of_light").is_null()) g.speed_of_light = p.at("speed_of_light").get<double>();
    const auto& c = p.at("cladding");
    if (c.at("type") == "drude") {
        g.cladding = Cladding::drude(c.at("plasma_frequency"));
    } else {
        g.cladding = Cladding::tabulated(c.at("omega").get<std::vector<double>>(), c.at("epsilon").get<std::vector<double>>());
    }
    return g;
}

Eigen::Vector3d vector3_from(const json& j) {
    return Eigen::Vector3d(j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>());
}

Parity parity_from(const std::string& name) {
    return name == "antisymmetric" ? Parity::antisymmetric : Parity::symmetric;
}

std::vector<double> time_grid(const json& p, int samples) {
    return numerics::linspace(p.at("t_start"), p.at("t_end"), static_cast<std::size_t>(samples));
}

}  // namespace tvcqed::cli::detail
