// Solves the Jacobi Dirichlet problem for the sample boundary data and prints
// the normal derivatives of each mode.

#include <catenoid/catenoid.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
  const char* path = argc > 1 ? argv[1] : "samples/boundary_data.csv";
  std::ifstream in(path);
  if (!in) {
    std::cerr << "cannot open " << path << "\n";
    return 2;
  }
  const auto& p = catenoid::critical_catenoid();
  try {
    const auto data = catenoid::parse_boundary_csv(in);
    const auto sol = catenoid::solve_dirichlet(data, catenoid::Grid1D::uniform(catenoid::Chart::s, 2049, p), p);
    for (const auto& m : sol.modes) {
      std::printf("mode %d %s: du/dnu(+T) = %+.9f  du/dnu(-T) = %+.9f  (error vs ODE reference %.1e)\n", m.data.mode,
                  catenoid::to_string(m.data.angular).c_str(), m.normal_plus, m.normal_minus, m.reference_error);
    }
    std::printf("flux = %.3e\n", sol.flux);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 0;
}
