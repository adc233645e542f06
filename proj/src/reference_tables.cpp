#include "polyshrink/reference_tables.hpp"

#include <cstring>
#include <stdexcept>
#include <string>

namespace polyshrink::tables {

namespace {

// Bundled published risk-ratio tables. Rows are the lambda grid, columns the
// omega grid; each cell lists the printed entries in table order.
const std::array<ReferenceTable, 4> kTables = {{
    // table 1, p = 14: (js, deg2, deg3)
    {1,
     14,
     3,
     {"js", "deg2", "deg3"},
     {{{0.2134, 0.2010, 0.1973}, {0.2920, 0.2809, 0.2776}, {0.3707, 0.3608, 0.3579},
       {0.6067, 0.6005, 0.5987}, {0.7640, 0.7603, 0.7592}, {0.9213, 0.9201, 0.9197}},
      {{0.3745, 0.3663, 0.36309}, {0.4371, 0.4297, 0.4268}, {0.4996, 0.4930, 0.4905},
       {0.6873, 0.6831, 0.6815}, {0.8124, 0.8099, 0.8089}, {0.9374, 0.9366, 0.9363}},
      {{0.5218, 0.5168, 0.5150}, {0.5697, 0.5652, 0.5635}, {0.6175, 0.6135, 0.6120},
       {0.7609, 0.7584, 0.7575}, {0.8565, 0.8550, 0.8545}, {0.9522, 0.9517, 0.9515}},
      {{0.6086, 0.6052, 0.6041}, {0.6477, 0.6447, 0.6437}, {0.6869, 0.6842, 0.6833},
       {0.8043, 0.8026, 0.8020}, {0.8826, 0.8816, 0.8812}, {0.9608, 0.9605, 0.9604}},
      {{0.6653, 0.6628, 0.6621}, {0.6988, 0.6965, 0.6959}, {0.7322, 0.7302, 0.7297},
       {0.8326, 0.8314, 0.8310}, {0.8996, 0.8988, 0.8986}, {0.9665, 0.9663, 0.9662}}}},
    // table 2, p = 18: (js, deg2, deg3)
    {2,
     18,
     3,
     {"js", "deg2", "deg3"},
     {{{0.1688, 0.1608, 0.1563}, {0.2519, 0.2448, 0.2406}, {0.3351, 0.3287, 0.3250},
       {0.5844, 0.5804, 0.5781}, {0.7506, 0.7482, 0.7469}, {0.9169, 0.9161, 0.9156}},
      {{0.3079, 0.3021, 0.2980}, {0.3771, 0.3719, 0.3682}, {0.4463, 0.4417, 0.4384},
       {0.6540, 0.6511, 0.6490}, {0.7924, 0.7906, 0.7894}, {0.9308, 0.9302, 0.9298}},
      {{0.4535, 0.4418, 0.4390}, {0.5011, 0.4976, 0.4951}, {0.5565, 0.5534, 0.5512},
       {0.7228, 0.7209, 0.7195}, {0.8337, 0.8325, 0.8317}, {0.9446, 0.9442, 0.9439}},
      {{0.5327, 0.5299, 0.5280}, {0.5794, 0.5769, 0.5752}, {0.6261, 0.6239, 0.6224},
       {0.7663, 0.7649, 0.7640}, {0.8598, 0.8590, 0.8584}, {0.9533, 0.9530, 0.9528}},
      {{0.5923, 0.5901, 0.5888}, {0.6331, 0.6311, 0.6299}, {0.6738, 0.6721, 0.6710},
       {0.7961, 0.7951, 0.7944}, {0.8777, 0.8770, 0.8766}, {0.9592, 0.9590, 0.9589}}}},
    // table 3, p = 20: (deg3, deg4)
    {3,
     20,
     2,
     {"deg3", "deg4", nullptr},
     {{{0.1419, 0.1414, 0}, {0.2277, 0.2274, 0}, {0.3135, 0.3134, 0},
       {0.5709, 0.5713, 0}, {0.7426, 0.7432, 0}, {0.9142, 0.9152, 0}},
      {{0.2738, 0.2732, 0}, {0.3464, 0.3459, 0}, {0.4190, 0.4187, 0},
       {0.6369, 0.6368, 0}, {0.7821, 0.7822, 0}, {0.9274, 0.9277, 0}},
      {{0.4091, 0.4087, 0}, {0.4682, 0.4679, 0}, {0.5273, 0.5270, 0},
       {0.7045, 0.7044, 0}, {0.8227, 0.8227, 0}, {0.9409, 0.9410, 0}},
      {{0.4969, 0.4967, 0}, {0.5472, 0.5470, 0}, {0.5975, 0.5973, 0},
       {0.7484, 0.7483, 0}, {0.8491, 0.8490, 0}, {0.9497, 0.9497, 0}},
      {{0.5581, 0.5579, 0}, {0.6022, 0.6021, 0}, {0.6464, 0.6463, 0},
       {0.7790, 0.7790, 0}, {0.8674, 0.8674, 0}, {0.9558, 0.9558, 0}}}},
    // table 4, p = 24: (deg3, deg4)
    {4,
     24,
     2,
     {"deg3", "deg4", nullptr},
     {{{0.1201, 0.1191, 0}, {0.2081, 0.2074, 0}, {0.2961, 0.2957, 0},
       {0.5600, 0.5606, 0}, {0.7360, 0.7372, 0}, {0.9120, 0.9138, 0}},
      {{0.2359, 0.2348, 0}, {0.3123, 0.3114, 0}, {0.3887, 0.3880, 0},
       {0.6180, 0.6178, 0}, {0.7708, 0.7710, 0}, {0.9236, 0.9242, 0}},
      {{0.3604, 0.3596, 0}, {0.4244, 0.4237, 0}, {0.4883, 0.4877, 0},
       {0.6802, 0.6799, 0}, {0.8081, 0.8081, 0}, {0.9360, 0.9362, 0}},
      {{0.4448, 0.4442, 0}, {0.5003, 0.4998, 0}, {0.5558, 0.5554, 0},
       {0.7224, 0.7222, 0}, {0.8334, 0.8333, 0}, {0.9445, 0.9445, 0}},
      {{0.5055, 0.5051, 0}, {0.5549, 0.5546, 0}, {0.6044, 0.6041, 0},
       {0.7527, 0.7526, 0}, {0.8516, 0.8516, 0}, {0.9505, 0.9505, 0}}}},
}};

}  // namespace

std::span<const ReferenceTable> reference_tables() { return kTables; }

const ReferenceTable& reference_table(int id) {
    if (id < 1 || id > 4) {
        throw std::out_of_range("reference_table: id must be 1..4, got " +
                                std::to_string(id));
    }
    return kTables[static_cast<std::size_t>(id - 1)];
}

int entry_degree(const char* label) {
    if (std::strcmp(label, "js") == 0) return 1;
    if (std::strcmp(label, "deg2") == 0) return 2;
    if (std::strcmp(label, "deg3") == 0) return 3;
    if (std::strcmp(label, "deg4") == 0) return 4;
    throw std::invalid_argument("unknown estimator label: " +
                                std::string(label));
}

}  // namespace polyshrink::tables
