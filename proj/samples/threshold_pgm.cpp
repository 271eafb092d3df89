// Minimal use of the library: threshold a PGM with both searches and write
// the bisection mask.
//
//   sample_threshold_pgm in.pgm mask.pgm

#include <fstream>
#include <iostream>

#include "otsubis/otsubis.hpp"

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: " << argv[0] << " in.pgm mask.pgm\n";
    return 2;
  }
  try {
    const auto image = otsubis::load_image_file(argv[1]);
    const otsubis::MomentTable moments(otsubis::compute_histogram(image));

    otsubis::VarianceEvaluator exhaustive_ev(moments);
    const auto exhaustive = otsubis::exhaustive_otsu(exhaustive_ev);

    otsubis::VarianceEvaluator bisection_ev(moments);
    const auto [bisection, trace] = otsubis::bisection_otsu(bisection_ev);

    std::cout << "exhaustive: t=" << exhaustive.threshold << " cost=" << exhaustive.reported_cost << '\n'
              << "bisection:  t=" << bisection.threshold << " iterations=" << bisection.iterations
              << " cost=" << bisection.reported_cost << " (x" << otsubis::reduction_factor(bisection) << ")\n";

    std::ofstream mask(argv[2], std::ios::binary);
    otsubis::write_binary_mask(image, otsubis::Threshold(bisection.threshold), mask);
  } catch (const otsubis::Error& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
  return 0;
}
