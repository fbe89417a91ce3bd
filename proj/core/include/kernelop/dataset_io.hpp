#pragma once

#include <filesystem>
#include <iosfwd>

#include "kernelop/grids.hpp"

namespace kernelop {

inline constexpr char kDatasetMagic[8] = {'K', 'O', 'P', 'D', 'A', 'T', 'A', '1'};

/// Little-endian binary layout: magic, example, J, n_s, n0, seed, nsr, sigma, then x, y, s, g
/// (row-major), f, f_clean, noise.
void write_dataset(std::ostream& out, const Dataset& data);
Dataset read_dataset(std::istream& in);

void write_dataset(const std::filesystem::path& path, const Dataset& data);
Dataset read_dataset(const std::filesystem::path& path);

}  // namespace kernelop
