#pragma once

#include <vector>

#include "dnls/grid.hpp"

namespace dnls {

double mass(const Field& q);
double hamiltonian(const Field& q);
double h2(const Field& q);

// imaginary residue of the complex quadratures behind hamiltonian/h2
double hamiltonian_imag(const Field& q);
double h2_imag(const Field& q);

// 2 Im(q' qbar) + 3/2 |q|^4
Field mass_flux(const Field& q);

// max over interior snapshots of ||d_t |q|^2 + d_x flux||, d_t by second-order
// central differences, normalised by max ||d_x flux||
double micro_mass_residual(const std::vector<Field>& snapshots, double dt);

}  // namespace dnls
