#pragma once

// Flat binary records for coefficient fields and Green columns.
//
// Layout, all little-endian, no padding:
//   int64  d
//   int64  L
//   double lambda
//   int64  kind tag   (EnsembleKind value of the source ensemble)
//   uint64 seed
//   int64  sample index
//   double values[...] (d L^d edge values or L^d vertex values, canonical order)

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "alab/coefficients.hpp"

namespace alab {

struct GreenColumn;

struct RecordHeader {
  std::int64_t d = 0;
  std::int64_t L = 0;
  double lambda = 0.0;
  std::int64_t kind_tag = 0;
  std::uint64_t seed = 0;
  std::int64_t index = 0;

  friend bool operator==(const RecordHeader&, const RecordHeader&) = default;
};

inline constexpr std::size_t kRecordHeaderBytes = 48;

struct FieldRecord {
  RecordHeader header;
  std::vector<double> values;
};

void write_record(std::ostream& out, const RecordHeader& header, std::span<const double> values);
/// Reads to end of stream; DomainError on truncation or a partial value.
FieldRecord read_record(std::istream& in);

void export_field(const CoefficientField& a, const std::filesystem::path& path);
/// Rebuilds the field on `lat`; DomainError if the header or length disagrees.
CoefficientField import_field(const std::filesystem::path& path, const LatticePtr& lat);

void export_green(const GreenColumn& col, double lambda, const std::filesystem::path& path);

}  // namespace alab
