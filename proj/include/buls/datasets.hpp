#pragma once

// Bundled real datasets.
//
// uefa: 37 UEFA Champions League group-stage matches (2004/05 and 2005/06).
// w1 is the time until the first goal scored directly from a kick by either
// team, w2 the time until the first goal of the home team, both in minutes
// divided by 90. Stored as integer minutes so the proportions are exact;
// uefa-table is the same data rounded to three decimals.
//
// fifa: 32 national teams of the 2022 World Cup. w1 is the completion
// proportion of medium passes (14 to 18 m), w2 that of long passes (over 37 m).

#include <string>
#include <vector>

#include "buls/core.hpp"

namespace buls::datasets {

BivariateDataset uefa();
BivariateDataset uefa_table();
BivariateDataset fifa();

std::vector<std::string> names();
/// Throws DataError for an unknown name.
BivariateDataset by_name(const std::string& name);

}  // namespace buls::datasets
