#pragma once

#include <array>
#include <span>

namespace polyshrink::tables {

inline constexpr int kRows = 5;    // lambda values
inline constexpr int kCols = 6;    // omega values
inline constexpr std::array<double, kRows> kLambdas = {1.2418, 5.0019, 10.4311,
                                                       15.4110, 20.0000};
inline constexpr std::array<double, kCols> kOmegas = {0.0, 0.1, 0.2,
                                                      0.5, 0.7, 0.9};

// One bundled reference table of published risk ratios: 5 lambda rows x
// 6 omega columns, each cell holding 2 or 3 estimator entries. Tables 1-2
// list (js, deg2, deg3) at p = 14, 18; tables 3-4 list (deg3, deg4) at
// p = 20, 24. Values are stored exactly as printed (including the one
// five-digit entry in table 1).
struct ReferenceTable {
    int id;
    int p;
    int entries;                              // 2 or 3 per cell
    std::array<const char*, 3> entry_labels;  // "js", "deg2", ...
    double values[kRows][kCols][3];           // unused slots are 0
};

std::span<const ReferenceTable> reference_tables();
const ReferenceTable& reference_table(int id);  // id in 1..4

// Degree of the estimator behind an entry label (js -> 1, degN -> N).
int entry_degree(const char* label);

}  // namespace polyshrink::tables
