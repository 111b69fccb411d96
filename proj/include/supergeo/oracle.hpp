#pragma once

#include <string>
#include <vector>

#include "supergeo/derivation.hpp"

namespace supergeo {

// Naive, fully enumerated verifiers. Correctness anchors for the main path;
// they share nothing with it beyond the superalgebra substrate.
struct OracleReport {
    std::string query;
    std::string method;
    std::string value;
};

// dim of degree-m forms on P^n by direct monomial enumeration.
long monomial_h0(int n, int m);
OracleReport monomial_h0_report(int n, int m);

// (h0, h1) of O(m) on P^1 by explicit Laurent enumeration on the two-chart
// cover; |m| <= 12.
std::pair<long, long> cech_p1(int m);
OracleReport cech_p1_report(int m);

// H^q(P^n, Omega^j(m)) for n <= 2 via the Euler-contraction model in
// homogeneous coordinates: j-forms sum f_A dx_A with ker(i_E) imposed.
std::vector<long> cech_pn_form(int n, int j, int m);

// All solutions of v(theta) = 1 over odd monomials of even degree <= deg:
// a particular solution plus a basis of the homogeneous kernel.
struct WitnessSet {
    bool solvable = false;
    std::vector<SuperPoly> solutions;  // particular first, then particular+kernel elements
    std::vector<SuperPoly> kernel;
};
WitnessSet exhaustive_witness(const HomologicalField& v, int deg);

}  // namespace supergeo
