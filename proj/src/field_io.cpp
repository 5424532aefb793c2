#include "alab/field_io.hpp"

#include <array>
#include <bit>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>

#include "alab/solver.hpp"

namespace alab {

namespace {

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> bytes{};
  for (std::size_t i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
  out.write(bytes.data(), 8);
}

std::uint64_t get_u64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

}  // namespace

void write_record(std::ostream& out, const RecordHeader& h, std::span<const double> values) {
  put_u64(out, static_cast<std::uint64_t>(h.d));
  put_u64(out, static_cast<std::uint64_t>(h.L));
  put_u64(out, std::bit_cast<std::uint64_t>(h.lambda));
  put_u64(out, static_cast<std::uint64_t>(h.kind_tag));
  put_u64(out, h.seed);
  put_u64(out, static_cast<std::uint64_t>(h.index));
  for (double v : values) put_u64(out, std::bit_cast<std::uint64_t>(v));
  if (!out) throw DomainError("failed writing field record");
}

FieldRecord read_record(std::istream& in) {
  const std::vector<unsigned char> bytes{std::istreambuf_iterator<char>(in),
                                         std::istreambuf_iterator<char>()};
  if (bytes.size() < kRecordHeaderBytes) throw DomainError("field record truncated in header");
  if ((bytes.size() - kRecordHeaderBytes) % 8 != 0)
    throw DomainError("field record payload is not a whole number of doubles");
  const unsigned char* p = bytes.data();
  FieldRecord rec;
  rec.header.d = static_cast<std::int64_t>(get_u64(p));
  rec.header.L = static_cast<std::int64_t>(get_u64(p + 8));
  rec.header.lambda = std::bit_cast<double>(get_u64(p + 16));
  rec.header.kind_tag = static_cast<std::int64_t>(get_u64(p + 24));
  rec.header.seed = get_u64(p + 32);
  rec.header.index = static_cast<std::int64_t>(get_u64(p + 40));
  const std::size_t n = (bytes.size() - kRecordHeaderBytes) / 8;
  rec.values.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    rec.values[i] = std::bit_cast<double>(get_u64(p + kRecordHeaderBytes + 8 * i));
  return rec;
}

void export_field(const CoefficientField& a, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot open " + path.string() + " for writing");
  const auto& prov = a.provenance();
  write_record(out,
               {a.lattice().dim(), a.lattice().side(), a.lambda(), prov.kind_tag, prov.seed,
                prov.index},
               a.conductance().values());
}

CoefficientField import_field(const std::filesystem::path& path, const LatticePtr& lat) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open " + path.string());
  FieldRecord rec = read_record(in);
  if (rec.header.d != lat->dim() || rec.header.L != lat->side())
    throw DomainError("field record shape does not match lattice");
  const RecordHeader h = rec.header;
  return CoefficientField(EdgeField(lat, std::move(rec.values)), h.lambda,
                          {h.kind_tag, h.seed, h.index});
}

void export_green(const GreenColumn& col, double lambda, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot open " + path.string() + " for writing");
  const auto& lat = col.values.lattice();
  write_record(out,
               {lat.dim(), lat.side(), lambda, col.provenance.kind_tag, col.provenance.seed,
                col.provenance.index},
               col.values.values());
}

}  // namespace alab
