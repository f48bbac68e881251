#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "bellsq/diagram.hpp"
#include "bellsq/quantum.hpp"

namespace bellsq {

// Optional +-1 outcome values per corner, in axis order Q, R, S, T.
struct CornerRvs {
  std::array<std::vector<double>, 4> values;
};

// On-disk form of a square: four corners, four joint tables, optional
// dichotomic variables.
struct BellSquareDoc {
  BellSquare square;
  std::optional<CornerRvs> rvs;
};

// Serialization uses shortest-round-trip formatting for doubles, so
// parse(serialize(doc)) reproduces every probability bit for bit.
std::string serialize_bell_square(const BellSquareDoc& doc);

// Throws std::runtime_error on malformed JSON, missing keys, shape
// mismatches, or rvs values other than exactly +-1. Does not check
// probabilistic validity; that is the caller's separate step.
BellSquareDoc parse_bell_square(const std::string& text);

BellSquareDoc load_bell_square(const std::string& path);
void save_bell_square(const BellSquareDoc& doc, const std::string& path);

// Density matrix file: {"rho": [[ [re, im], ... ], ...]} of size 4x4.
// Throws std::runtime_error on shape/parse problems and
// std::invalid_argument when the matrix is not a valid state.
DensityMatrix load_density(const std::string& path);

std::string read_text_file(const std::string& path);  // throws std::runtime_error
void write_text_file(const std::string& path, const std::string& text);

}  // namespace bellsq
