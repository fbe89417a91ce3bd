#include "kernelop/dataset_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace kernelop {
namespace {

static_assert(std::endian::native == std::endian::little, "dataset files are little-endian");

template <typename T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw std::runtime_error("dataset: unexpected end of file");
  return value;
}

void put_vector(std::ostream& out, const Vector& v) {
  put<std::uint64_t>(out, static_cast<std::uint64_t>(v.size()));
  out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
}

Vector get_vector(std::istream& in, Index expected) {
  const auto n = get<std::uint64_t>(in);
  if (static_cast<Index>(n) != expected) throw std::runtime_error("dataset: inconsistent vector length");
  Vector v(expected);
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(expected * sizeof(double)));
  if (!in) throw std::runtime_error("dataset: unexpected end of file");
  return v;
}

}  // namespace

void write_dataset(std::ostream& out, const Dataset& data) {
  out.write(kDatasetMagic, sizeof(kDatasetMagic));
  put<std::int32_t>(out, static_cast<std::int32_t>(data.example));
  put<std::int32_t>(out, data.grids.J);
  put<std::int32_t>(out, data.grids.ns);
  put<std::int32_t>(out, data.n0);
  put<std::uint64_t>(out, data.seed);
  put<double>(out, data.nsr);
  put<double>(out, data.sigma);
  put_vector(out, data.grids.x);
  put_vector(out, data.grids.y);
  put_vector(out, data.grids.s);
  put<std::uint64_t>(out, static_cast<std::uint64_t>(data.g.rows()));
  put<std::uint64_t>(out, static_cast<std::uint64_t>(data.g.cols()));
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows = data.g;
  out.write(reinterpret_cast<const char*>(rows.data()), static_cast<std::streamsize>(rows.size() * sizeof(double)));
  put_vector(out, data.f);
  put_vector(out, data.f_clean);
  put_vector(out, data.noise);
  if (!out) throw std::runtime_error("dataset: write failed");
}

Dataset read_dataset(std::istream& in) {
  char magic[sizeof(kDatasetMagic)];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kDatasetMagic, sizeof(magic)) != 0) throw std::runtime_error("dataset: bad magic header");
  Dataset data;
  const auto example = get<std::int32_t>(in);
  if (example < 0 || example > 2) throw std::runtime_error("dataset: unknown example id");
  data.example = static_cast<Example>(example);
  const auto J = get<std::int32_t>(in);
  const auto ns = get<std::int32_t>(in);
  data.n0 = get<std::int32_t>(in);
  data.seed = get<std::uint64_t>(in);
  data.nsr = get<double>(in);
  data.sigma = get<double>(in);
  data.grids = build_grids(J, ns);
  data.grids.x = get_vector(in, J);
  data.grids.y = get_vector(in, 3 * static_cast<Index>(J) + 1);
  data.grids.s = get_vector(in, ns);
  const auto rows = get<std::uint64_t>(in);
  const auto cols = get<std::uint64_t>(in);
  if (static_cast<Index>(rows) != data.rows() || static_cast<Index>(cols) != ns) {
    throw std::runtime_error("dataset: g has inconsistent shape");
  }
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> g(rows, cols);
  in.read(reinterpret_cast<char*>(g.data()), static_cast<std::streamsize>(g.size() * sizeof(double)));
  if (!in) throw std::runtime_error("dataset: unexpected end of file");
  data.g = g;
  data.f = get_vector(in, data.rows());
  data.f_clean = get_vector(in, data.rows());
  data.noise = get_vector(in, data.rows());
  return data;
}

void write_dataset(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  write_dataset(out, data);
}

Dataset read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  try {
    return read_dataset(in);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

}  // namespace kernelop
