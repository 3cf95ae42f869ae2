#include "fixtures.hpp"

#include <fstream>
#include <sstream>

namespace fixtures {

std::string t4_csv() { return "color,size,val\nred,S,1.0\nred,L,2.0\nblue,S,3.0\nblue,L,4.0\n"; }

insightmap::Dataset t4() { return insightmap::ingest_csv(t4_csv(), {}, "t4"); }

std::string random_csv(const RandomSchema& schema, std::mt19937_64& rng) {
    std::string out;
    for (std::size_t d = 0; d < schema.cardinalities.size(); ++d) {
        out += (d ? ",d" : "d") + std::to_string(d);
    }
    for (std::size_t m = 0; m < schema.measures; ++m) {
        out += (schema.cardinalities.empty() && m == 0 ? "m" : ",m") + std::to_string(m);
    }
    out += "\n";
    std::uniform_real_distribution<double> value(0.0, 100.0);
    for (std::size_t r = 0; r < schema.rows; ++r) {
        std::string line;
        for (std::size_t d = 0; d < schema.cardinalities.size(); ++d) {
            std::uniform_int_distribution<std::size_t> pick(0, schema.cardinalities[d] - 1);
            line += (d ? ",v" : "v") + std::to_string(pick(rng));
        }
        for (std::size_t m = 0; m < schema.measures; ++m) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.3f", value(rng));
            line += (schema.cardinalities.empty() && m == 0 ? "" : ",") + std::string(buf);
        }
        out += line + "\n";
    }
    return out;
}

insightmap::Dataset random_dataset(const RandomSchema& schema, std::mt19937_64& rng) {
    return insightmap::ingest_csv(random_csv(schema, rng), {}, "random");
}

std::string league_csv(std::uint64_t seed, int change_year, double shift, const std::string& dominant) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    const std::vector<std::string> leagues{"ABA", "BAA", dominant};
    std::string out = "year,league,team,points\n";
    for (int year = 1950; year < 1990; ++year) {
        for (const auto& league : leagues) {
            const double weight = league == dominant ? 8.0 : 1.0;
            for (int team = 0; team < 3; ++team) {
                const double base = 100.0 + (year >= change_year ? shift * 10.0 : 0.0);
                const double points = weight * (base + 10.0 * noise(rng));
                char buf[48];
                std::snprintf(buf, sizeof buf, "%d,%s,T%d,%.4f\n", year, league.c_str(), team, points);
                out += buf;
            }
        }
    }
    return out;
}

std::string wide_csv(std::size_t rows, std::size_t dimensions, std::size_t measures, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::string out;
    for (std::size_t d = 0; d < dimensions; ++d) out += (d ? ",dim" : "dim") + std::to_string(d);
    for (std::size_t m = 0; m < measures; ++m) out += ",measure" + std::to_string(m);
    out += "\n";
    std::vector<std::size_t> cards(dimensions);
    for (std::size_t d = 0; d < dimensions; ++d) cards[d] = 3 + d % 4;
    std::vector<std::size_t> codes(dimensions);
    char buf[32];
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t d = 0; d < dimensions; ++d) {
            codes[d] = std::uniform_int_distribution<std::size_t>(0, cards[d] - 1)(rng);
            out += (d ? ",c" : "c") + std::to_string(codes[d]);
        }
        for (std::size_t m = 0; m < measures; ++m) {
            // Measures depend on the first dimensions so the table has structure.
            const double level = 50.0 + 10.0 * static_cast<double>(codes[m % dimensions]) * (m % 2 ? -1.0 : 1.0);
            std::snprintf(buf, sizeof buf, ",%.4f", level + 5.0 * noise(rng));
            out += buf;
        }
        out += "\n";
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << bytes;
}

}  // namespace fixtures
