#pragma once

#include "supergeo/atlas.hpp"

namespace supergeo {

struct IsoResult {
    bool found = false;
    int bound = 0;
    std::vector<int> chart_map;       // Y chart matched to each X chart
    std::vector<GenAssignment> maps;  // per X chart i: ring_Y(chart_map[i]) -> ring_X(i)
};

// Searches chart-wise ring isomorphisms commuting with all representable
// transitions. Positive answers are verified exactly; negative answers are
// bounded: the search covers chart matchings (all permutations up to 6
// charts), sign-diagonal reduced layers, and polynomial corrections of even
// degree <= bound through nilpotent order 2.
IsoResult iso_check(const Atlas& X, const Atlas& Y, int bound);

}  // namespace supergeo
