#include "phonon_chill/dump.hpp"

#include "phonon_chill/errors.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>

namespace phonon_chill {

namespace {

constexpr std::array<char, 8> kMagic{'P', 'H', 'C', 'H', 'I', 'L', 'L', '1'};


template <typename T>
T to_little(T value) {
  if constexpr (std::endian::native == std::endian::big) {
    std::array<unsigned char, sizeof(T)> bytes;
    std::memcpy(bytes.data(), &value, sizeof(T));
    std::reverse(bytes.begin(), bytes.end());
    std::memcpy(&value, bytes.data(), sizeof(T));
  }
  return value;
}

class Writer {
 public:
  explicit Writer(const std::string& path) : out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw ValidationError("cannot open dump file for writing: " + path);
  }
  template <typename T>
  void put(T value) {
    value = to_little(value);
    out_.write(reinterpret_cast<const char*>(&value), sizeof(T));
  }
  void bytes(const char* data, std::size_t n) { out_.write(data, static_cast<std::streamsize>(n)); }
  void finish() {
    out_.flush();
    if (!out_) throw SolverError("failed while writing dump file");
  }

 private:
  std::ofstream out_;
};

class Reader {
 public:
  explicit Reader(const std::string& path) : in_(path, std::ios::binary) {
    if (!in_) throw ValidationError("cannot open dump file: " + path);
  }
  template <typename T>
  T get() {
    T value{};
    in_.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in_) throw ValidationError("truncated dump file");
    return to_little(value);
  }
  void bytes(char* data, std::size_t n) {
    in_.read(data, static_cast<std::streamsize>(n));
    if (!in_) throw ValidationError("truncated dump file");
  }

 private:
  std::ifstream in_;
};

void write_header(Writer& w, DumpKind kind, const SpaceLayout& layout, std::size_t rows, std::size_t cols) {
  w.bytes(kMagic.data(), kMagic.size());
  w.put(static_cast<std::uint32_t>(kind));
  w.put(static_cast<std::uint32_t>(layout.subsystem_count()));
  for (std::size_t d : layout.dims()) w.put(static_cast<std::uint32_t>(d));
  w.put(static_cast<std::uint64_t>(rows));
  w.put(static_cast<std::uint64_t>(cols));
}

void write_entry(Writer& w, cplx z) {
  w.put(z.real());
  w.put(z.imag());
}

}  // namespace

void write_dump(const std::string& path, const Liouvillian& liouvillian) {
  Writer w(path);
  const auto n = static_cast<std::size_t>(liouvillian.matrix.rows());
  write_header(w, liouvillian.restricted() ? DumpKind::LiouvillianBlock : DumpKind::Liouvillian,
               liouvillian.layout, n, n);
  const Eigen::SparseMatrix<cplx, Eigen::RowMajor> rows = liouvillian.matrix;
  for (Eigen::Index r = 0; r < rows.outerSize(); ++r) {
    Eigen::Index next = 0;
    for (Eigen::SparseMatrix<cplx, Eigen::RowMajor>::InnerIterator it(rows, r); it; ++it) {
      for (; next < it.col(); ++next) write_entry(w, cplx{});
      write_entry(w, it.value());
      next = it.col() + 1;
    }
    for (; next < rows.cols(); ++next) write_entry(w, cplx{});
  }
  if (liouvillian.restricted()) {
    w.put(static_cast<std::uint64_t>(liouvillian.kept.size()));
    for (std::size_t k : liouvillian.kept) w.put(static_cast<std::uint64_t>(k));
  }
  w.finish();
}

void write_dump(const std::string& path, const LabeledOperator& rho) {
  Writer w(path);
  write_header(w, DumpKind::DensityMatrix, rho.layout(), rho.dim(), rho.dim());
  const Matrix& m = rho.matrix();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) write_entry(w, m(r, c));
  }
  w.finish();
}

DumpContents read_dump(const std::string& path) {
  Reader r(path);
  std::array<char, 8> magic{};
  r.bytes(magic.data(), magic.size());
  if (magic != kMagic) throw ValidationError("not a phonon_chill dump: " + path);
  DumpContents out;
  const auto kind = r.get<std::uint32_t>();
  if (kind < 1 || kind > 3) throw ValidationError("unknown dump kind");
  out.kind = static_cast<DumpKind>(kind);
  const auto count = r.get<std::uint32_t>();
  for (std::uint32_t i = 0; i < count; ++i) out.dims.push_back(r.get<std::uint32_t>());
  const auto rows = r.get<std::uint64_t>();
  const auto cols = r.get<std::uint64_t>();
  out.matrix.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::uint64_t i = 0; i < rows; ++i) {
    for (std::uint64_t j = 0; j < cols; ++j) {
      const double re = r.get<double>();
      const double im = r.get<double>();
      out.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cplx{re, im};
    }
  }
  if (out.kind == DumpKind::LiouvillianBlock) {
    const auto kept = r.get<std::uint64_t>();
    for (std::uint64_t i = 0; i < kept; ++i) out.kept.push_back(r.get<std::uint64_t>());
  }
  return out;
}

}  // namespace phonon_chill
