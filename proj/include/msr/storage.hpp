#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "msr/construct.hpp"

namespace msr {

inline constexpr int kManifestFormat = 1;
inline constexpr std::uint8_t kChunkVersion = 1;
inline constexpr std::size_t kChunkHeaderSize = 27;
inline constexpr std::uint64_t kMinFileModulus = 257;
inline constexpr const char* kManifestName = "manifest.txt";

struct Manifest {
  int format = kManifestFormat;
  int n = 0;
  int k = 0;
  std::uint64_t p = 0;
  std::size_t ell = 0;
  std::vector<Symbol> lambdas;
  std::uint64_t length = 0;
  std::uint32_t stripes = 0;
  std::vector<std::string> chunks;
};

Manifest make_manifest(const CodeParams& params, std::uint64_t length);
void write_manifest(std::ostream& os, const Manifest& m);
Manifest read_manifest(std::istream& is);
Manifest load_manifest(const std::filesystem::path& dir);
// Rebuilds and validates the code parameters a manifest describes.
CodeParams manifest_params(const Manifest& m);

struct ChunkHeader {
  std::uint64_t p = 0;
  std::uint16_t n = 0;
  std::uint16_t k = 0;
  std::uint16_t node = 0;
  std::uint32_t ell = 0;
  std::uint32_t stripes = 0;

  friend bool operator==(const ChunkHeader&, const ChunkHeader&) = default;
};

void write_chunk_header(std::ostream& os, const ChunkHeader& h);
// Throws FormatError on a bad magic, version or short read.
ChunkHeader read_chunk_header(std::istream& is);

// Symbol (de)serialization, `width` bytes little-endian.
void write_symbols(std::ostream& os, std::span<const Symbol> symbols, unsigned width);
void read_symbols(std::istream& is, std::span<Symbol> symbols, unsigned width, std::uint64_t p);

// Writes one chunk per node plus the manifest into `dir`. Requires p >= 257.
Manifest encode_file(const std::filesystem::path& input, const std::filesystem::path& dir, const CodeParams& params);

// Reassembles the original bytes from whatever chunks are present.
void decode_file(const std::filesystem::path& dir, const std::filesystem::path& output);

struct RepairStats {
  std::size_t symbols_per_stripe = 0;
  std::size_t cut_set_bound = 0;  // per stripe
  std::uint64_t symbols_total = 0;
  std::uint32_t stripes = 0;
};

// Regenerates the chunk of `failed` from the chunks of `helpers`.
RepairStats repair_chunk(const std::filesystem::path& dir, int failed, std::span<const int> helpers);

}  // namespace msr
