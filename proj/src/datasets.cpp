#include "buls/datasets.hpp"

#include <array>
#include <cmath>

#include "buls/errors.hpp"

namespace buls::datasets {

namespace {

constexpr std::array<std::array<int, 2>, 37> kUefaMinutes{{
    {26, 20}, {63, 18}, {19, 19}, {66, 85}, {40, 40}, {49, 49}, {8, 8},   {69, 71}, {39, 39}, {82, 48},
    {72, 72}, {66, 62}, {25, 9},  {41, 3},  {16, 75}, {18, 18}, {22, 14}, {42, 42}, {2, 2},   {36, 52},
    {34, 34}, {53, 39}, {54, 7},  {51, 28}, {76, 64}, {64, 15}, {26, 48}, {16, 16}, {44, 13}, {25, 14},
    {55, 11}, {49, 49}, {24, 24}, {44, 30}, {42, 3},  {27, 47}, {28, 28},
}};

constexpr std::array<std::array<double, 2>, 32> kFifa{{
    {0.888, 0.541}, {0.815, 0.474}, {0.907, 0.624}, {0.891, 0.606}, {0.827, 0.517}, {0.898, 0.557},
    {0.856, 0.462}, {0.861, 0.618}, {0.890, 0.603}, {0.860, 0.477}, {0.920, 0.646}, {0.894, 0.587},
    {0.913, 0.648}, {0.849, 0.471}, {0.781, 0.427}, {0.828, 0.442}, {0.864, 0.581}, {0.820, 0.527},
    {0.846, 0.526}, {0.879, 0.601}, {0.860, 0.481}, {0.885, 0.616}, {0.862, 0.592}, {0.769, 0.463},
    {0.845, 0.495}, {0.846, 0.489}, {0.931, 0.751}, {0.863, 0.555}, {0.856, 0.447}, {0.879, 0.569},
    {0.812, 0.613}, {0.841, 0.594},
}};

double round3(double x) { return std::round(x * 1000.0) / 1000.0; }

}  // namespace

BivariateDataset uefa() {
  BivariateDataset d;
  d.label = "uefa";
  for (const auto& m : kUefaMinutes) d.rows.push_back(UnitPoint::from_unit(m[0] / 90.0, m[1] / 90.0));
  return d;
}

BivariateDataset uefa_table() {
  BivariateDataset d;
  d.label = "uefa-table";
  for (const auto& m : kUefaMinutes) d.rows.push_back(UnitPoint::from_unit(round3(m[0] / 90.0), round3(m[1] / 90.0)));
  return d;
}

BivariateDataset fifa() {
  BivariateDataset d;
  d.label = "fifa";
  for (const auto& r : kFifa) d.rows.push_back(UnitPoint::from_unit(r[0], r[1]));
  return d;
}

std::vector<std::string> names() { return {"uefa", "uefa-table", "fifa"}; }

BivariateDataset by_name(const std::string& name) {
  if (name == "uefa") return uefa();
  if (name == "uefa-table") return uefa_table();
  if (name == "fifa") return fifa();
  throw DataError("unknown dataset '" + name + "'");
}

}  // namespace buls::datasets
