// Minimal library usage: parse a DIMACS formula, build its solution complex,
// print Betti numbers and cluster structure.

#include <fstream>
#include <iostream>

#include "topocube/complex.hpp"
#include "topocube/formula.hpp"
#include "topocube/homology.hpp"

int main(int argc, char** argv) {
    using namespace topocube;
    if (argc != 2) {
        std::cerr << "usage: betti_of_formula <file.cnf>\n";
        return 2;
    }
    std::ifstream in(argv[1]);
    CnfFormula f = parse_dimacs(in);
    SolutionSet s = enumerate_solutions(f);
    CubicalComplex complex = build_complex(s, 3);
    BettiVector b = betti_numbers(complex, 2, true);

    std::cout << "solutions: " << s.size() << "\n";
    std::cout << "betti:";
    for (int x : b.betti) std::cout << ' ' << x;
    std::cout << "\n";
    if (s.size() > 0) {
        ClusterPartition p = components(complex);
        std::cout << "clusters: " << p.count() << "\n";
        if (p.min_separation() > 0) std::cout << "min separation: " << p.min_separation() << "\n";
    }
    return 0;
}
