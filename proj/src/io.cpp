#include "rdmusic/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace rdmusic {

namespace {

constexpr char kMagic[4] = {'R', 'D', 'M', 'T'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little, "tensor I/O assumes a little-endian host");

template <typename T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("tensor file truncated");
  return v;
}

}  // namespace

void write_tensor(const std::filesystem::path& path, std::span<const std::size_t> dims, std::span<const cplx> data,
                  std::uint64_t seed) {
  std::size_t n = 1;
  for (std::size_t d : dims) n *= d;
  if (n != data.size()) throw std::invalid_argument("write_tensor: dims do not match data size");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os.write(kMagic, 4);
  put<std::uint32_t>(os, kVersion);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(dims.size()));
  put<std::uint64_t>(os, seed);
  for (std::size_t d : dims) put<std::uint64_t>(os, d);
  for (const cplx& z : data) {
    put<double>(os, z.real());
    put<double>(os, z.imag());
  }
  if (!os) throw std::runtime_error("write failed for " + path.string());
}

TensorFile read_tensor(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0) throw std::runtime_error("not a tensor file: " + path.string());
  if (get<std::uint32_t>(is) != kVersion) throw std::runtime_error("unsupported tensor file version");
  const auto rank = get<std::uint32_t>(is);
  TensorFile f;
  f.seed = get<std::uint64_t>(is);
  std::size_t n = 1;
  for (std::uint32_t i = 0; i < rank; ++i) {
    f.dims.push_back(static_cast<std::size_t>(get<std::uint64_t>(is)));
    n *= f.dims.back();
  }
  f.data.resize(n);
  for (cplx& z : f.data) {
    const double re = get<double>(is);
    const double im = get<double>(is);
    z = cplx(re, im);
  }
  return f;
}

void write_spectrum_csv(std::ostream& os, const MusicSpectrum& spectrum) {
  os << "angle_deg,value\n";
  for (std::size_t i = 0; i < spectrum.grid.size(); ++i)
    os << format_number(rad_to_deg(spectrum.grid[i])) << ',' << format_number(spectrum.values[i]) << '\n';
}

void write_rdmap_csv(std::ostream& os, const RealGrid& integrated) {
  os << "doppler_bin,range_bin,power\n";
  for (Eigen::Index r = 0; r < integrated.rows(); ++r)
    for (Eigen::Index c = 0; c < integrated.cols(); ++c)
      os << r << ',' << c << ',' << format_number(integrated(r, c)) << '\n';
}

void write_detections_header(std::ostream& os) {
  os << "trial,method,doppler_bin,range_bin,tau_s,fd_hz,power,theta_deg,winning_domain,winning_power\n";
}

void write_detections(std::ostream& os, const TrialRecord& rec, const SystemParams& p) {
  for (const MethodOutcome& o : rec.outcomes) {
    if (o.method == Method::proposed) {
      for (const FusedEstimate& f : rec.fused) {
        const Detection& d = f.detection;
        os << rec.trial_index << ',' << to_string(o.method) << ',' << d.doppler_bin << ',' << d.range_bin << ','
           << format_number(d.delay_est) << ',' << format_number(d.doppler_est) << ',' << format_number(d.peak_power)
           << ',' << format_number(rad_to_deg(f.doa_est)) << ',' << to_string(f.winning_domain) << ','
           << format_number(f.winning_power) << '\n';
      }
      continue;
    }
    for (const Estimate& e : o.estimates) {
      os << rec.trial_index << ',' << to_string(o.method) << ','
         << frequency_to_doppler_bin(e.doppler, p.n_symbols, p) << ',' << delay_to_range_bin(e.delay, p.n_subcarriers, p)
         << ',' << format_number(e.delay) << ',' << format_number(e.doppler) << ",," << format_number(rad_to_deg(e.doa))
         << ",,\n";
    }
  }
}

}  // namespace rdmusic
