#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "insightmap/dataset.hpp"

namespace fixtures {

/// color in {red,red,blue,blue}, size in {S,L,S,L}, val in {1,2,3,4}.
std::string t4_csv();
insightmap::Dataset t4();

struct RandomSchema {
    std::vector<std::size_t> cardinalities;  ///< one categorical dimension each
    std::size_t measures = 1;
    std::size_t rows = 20;
};

/// Dimensions d0.. with values v0..v{K-1}; measures m0.. with values in [0, 100).
/// Every row gets a value for every field.
std::string random_csv(const RandomSchema& schema, std::mt19937_64& rng);
insightmap::Dataset random_dataset(const RandomSchema& schema, std::mt19937_64& rng);

/// Synthetic league table: year 1950..1989 (ordinal), league, team, points.
/// Points shift up by `shift` standard deviations from `change_year`; the
/// year column needs a dimension override (40 distinct years); the
/// dominant league carries most of the points.
std::string league_csv(std::uint64_t seed, int change_year = 1968, double shift = 5.0,
                       const std::string& dominant = "NBA");

/// Wide synthetic table for end-to-end runs: `dimensions` categorical fields
/// (cardinality 3..6) plus `measures` measures.
std::string wide_csv(std::size_t rows, std::size_t dimensions, std::size_t measures, std::uint64_t seed);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& bytes);

}  // namespace fixtures
