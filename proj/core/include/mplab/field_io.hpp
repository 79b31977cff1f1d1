#pragma once

#include <string>

#include "mplab/fields.hpp"

namespace mplab {

/// Checkpoint format: one ASCII header line "MPLAB1 <kind> <n> <L>" with
/// kind in {scalar, vector, spinor}, followed by raw little-endian 64-bit
/// floats in ascending linear node order (vector: 3 per node, spinor: 4 per
/// node re/im interleaved). Round trips are bit exact.
void save_field(const ScalarField& f, const std::string& path);
void save_field(const VectorField& f, const std::string& path);
void save_field(const SpinorField& f, const std::string& path);

ScalarField load_scalar_field(const std::string& path);
VectorField load_vector_field(const std::string& path);
SpinorField load_spinor_field(const std::string& path);

} // namespace mplab
