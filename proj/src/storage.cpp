#include "msr/storage.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include "msr/codec.hpp"
#include "msr/error.hpp"
#include "msr/repair.hpp"

namespace msr {
namespace fs = std::filesystem;

namespace {

constexpr std::array<char, 4> kMagic{'M', 'S', 'R', 'C'};

template <typename T>
void put_le(std::ostream& os, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i) os.put(static_cast<char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xFF));
}

template <typename T>
T get_le(std::istream& is) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    const int c = is.get();
    if (c == std::char_traits<char>::eof()) throw FormatError("chunk header truncated");
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
  }
  return static_cast<T>(v);
}

template <typename T>
T parse_number(const std::string& key, const std::string& s) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw FormatError("manifest: bad value for " + key + ": '" + s + "'");
  return v;
}

std::string chunk_name(int node) {
  std::ostringstream os;
  os << "node_" << (node < 10 ? "0" : "") << node << ".chunk";
  return os.str();
}

ChunkHeader expected_header(const Manifest& m, int node) {
  return {m.p, static_cast<std::uint16_t>(m.n), static_cast<std::uint16_t>(m.k), static_cast<std::uint16_t>(node),
          static_cast<std::uint32_t>(m.ell), m.stripes};
}

std::string describe(const ChunkHeader& h) {
  std::ostringstream os;
  os << "p=" << h.p << " n=" << h.n << " k=" << h.k << " node=" << h.node << " ell=" << h.ell
     << " stripes=" << h.stripes;
  return os.str();
}

std::uintmax_t chunk_size(const Manifest& m, unsigned width) {
  return kChunkHeaderSize + static_cast<std::uintmax_t>(m.stripes) * m.ell * width;
}

// Opens a chunk and checks that its header and size agree with the manifest.
std::unique_ptr<std::ifstream> open_chunk(const fs::path& dir, const Manifest& m, int node, unsigned width) {
  const fs::path path = dir / m.chunks[static_cast<std::size_t>(node)];
  auto in = std::make_unique<std::ifstream>(path, std::ios::binary);
  if (!*in) throw Error("cannot open chunk " + path.string());
  const ChunkHeader got = read_chunk_header(*in);
  const ChunkHeader want = expected_header(m, node);
  if (!(got == want)) {
    throw FormatError("chunk " + path.string() + " does not belong to this manifest: has " + describe(got) +
                      ", expected " + describe(want));
  }
  if (fs::file_size(path) != chunk_size(m, width)) throw FormatError("chunk " + path.string() + " has the wrong size");
  return in;
}

void replace_file(const fs::path& tmp, const fs::path& target) {
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw Error("cannot write " + target.string() + ": " + ec.message());
}

}  // namespace

Manifest make_manifest(const CodeParams& params, std::uint64_t length) {
  Manifest m;
  m.n = params.n;
  m.k = params.k;
  m.p = params.field.modulus();
  m.ell = params.ell;
  m.lambdas = params.lambdas;
  m.length = length;
  const std::uint64_t stripe = static_cast<std::uint64_t>(params.k) * params.ell;
  m.stripes = static_cast<std::uint32_t>((length + stripe - 1) / stripe);
  for (int i = 0; i < params.n; ++i) m.chunks.push_back(chunk_name(i));
  return m;
}

void write_manifest(std::ostream& os, const Manifest& m) {
  os << "format=" << m.format << '\n'
     << "n=" << m.n << '\n'
     << "k=" << m.k << '\n'
     << "p=" << m.p << '\n'
     << "ell=" << m.ell << '\n'
     << "lambdas=";
  for (std::size_t i = 0; i < m.lambdas.size(); ++i) os << (i ? "," : "") << m.lambdas[i];
  os << '\n' << "length=" << m.length << '\n' << "stripes=" << m.stripes << '\n';
  for (std::size_t i = 0; i < m.chunks.size(); ++i) os << "chunk." << i << '=' << m.chunks[i] << '\n';
}

Manifest read_manifest(std::istream& is) {
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw FormatError("manifest: line without '=': " + line);
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  auto get = [&](const std::string& key) -> const std::string& {
    const auto it = kv.find(key);
    if (it == kv.end()) throw FormatError("manifest: missing key " + key);
    return it->second;
  };
  Manifest m;
  m.format = parse_number<int>("format", get("format"));
  if (m.format != kManifestFormat) throw FormatError("manifest: unsupported format " + std::to_string(m.format));
  m.n = parse_number<int>("n", get("n"));
  m.k = parse_number<int>("k", get("k"));
  m.p = parse_number<std::uint64_t>("p", get("p"));
  m.ell = parse_number<std::size_t>("ell", get("ell"));
  m.length = parse_number<std::uint64_t>("length", get("length"));
  m.stripes = parse_number<std::uint32_t>("stripes", get("stripes"));
  std::istringstream ls(get("lambdas"));
  std::string item;
  while (std::getline(ls, item, ',')) m.lambdas.push_back(parse_number<Symbol>("lambdas", item));
  if (m.n < 0 || m.n > 60) throw FormatError("manifest: n out of range");
  for (int i = 0; i < m.n; ++i) {
    const std::string& name = get("chunk." + std::to_string(i));
    if (name.empty() || name.find('/') != std::string::npos) throw FormatError("manifest: bad chunk name " + name);
    m.chunks.push_back(name);
  }
  return m;
}

Manifest load_manifest(const fs::path& dir) {
  std::ifstream in(dir / kManifestName);
  if (!in) throw Error("cannot open manifest in " + dir.string());
  return read_manifest(in);
}

CodeParams manifest_params(const Manifest& m) {
  if (m.p < kMinFileModulus) throw FormatError("manifest: p must be at least 257 for file storage");
  CodeParams params = make_params(m.n, m.k, PrimeField(m.p), m.lambdas);
  if (params.ell != m.ell) throw FormatError("manifest: ell does not match n");
  const std::uint64_t stripe = static_cast<std::uint64_t>(m.k) * m.ell;
  if (m.length > static_cast<std::uint64_t>(m.stripes) * stripe) throw FormatError("manifest: length exceeds stripes");
  return params;
}

void write_chunk_header(std::ostream& os, const ChunkHeader& h) {
  os.write(kMagic.data(), kMagic.size());
  os.put(static_cast<char>(kChunkVersion));
  put_le(os, h.p);
  put_le(os, h.n);
  put_le(os, h.k);
  put_le(os, h.node);
  put_le(os, h.ell);
  put_le(os, h.stripes);
}

ChunkHeader read_chunk_header(std::istream& is) {
  std::array<char, 4> magic{};
  if (!is.read(magic.data(), magic.size()) || magic != kMagic) throw FormatError("not a chunk file (bad magic)");
  const int version = is.get();
  if (version != kChunkVersion) throw FormatError("unsupported chunk version");
  ChunkHeader h;
  h.p = get_le<std::uint64_t>(is);
  h.n = get_le<std::uint16_t>(is);
  h.k = get_le<std::uint16_t>(is);
  h.node = get_le<std::uint16_t>(is);
  h.ell = get_le<std::uint32_t>(is);
  h.stripes = get_le<std::uint32_t>(is);
  return h;
}

void write_symbols(std::ostream& os, std::span<const Symbol> symbols, unsigned width) {
  std::vector<char> buf(symbols.size() * width);
  for (std::size_t i = 0; i < symbols.size(); ++i)
    for (unsigned b = 0; b < width; ++b) buf[i * width + b] = static_cast<char>((symbols[i] >> (8 * b)) & 0xFF);
  os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

void read_symbols(std::istream& is, std::span<Symbol> symbols, unsigned width, std::uint64_t p) {
  std::vector<unsigned char> buf(symbols.size() * width);
  if (!is.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()))) {
    throw FormatError("chunk data truncated");
  }
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    Symbol v = 0;
    for (unsigned b = 0; b < width; ++b) v |= static_cast<Symbol>(buf[i * width + b]) << (8 * b);
    if (v >= p) throw FormatError("chunk symbol out of field range");
    symbols[i] = v;
  }
}

Manifest encode_file(const fs::path& input, const fs::path& dir, const CodeParams& params) {
  if (params.field.modulus() < kMinFileModulus) {
    throw InvalidParams("file storage maps one byte to one symbol and needs p >= 257, got p = " +
                        std::to_string(params.field.modulus()));
  }
  std::ifstream in(input, std::ios::binary);
  if (!in) throw Error("cannot open input " + input.string());
  const Manifest m = make_manifest(params, fs::file_size(input));
  fs::create_directories(dir);

  const unsigned width = params.field.symbol_width();
  std::vector<std::ofstream> outs;
  for (int i = 0; i < params.n; ++i) {
    outs.emplace_back(dir / m.chunks[static_cast<std::size_t>(i)], std::ios::binary | std::ios::trunc);
    if (!outs.back()) throw Error("cannot create chunk in " + dir.string());
    write_chunk_header(outs.back(), expected_header(m, i));
  }

  const auto blocks = build_parity_blocks(params);
  const Encoder encoder(params, blocks);
  const std::size_t stripe = static_cast<std::size_t>(params.k) * params.ell;
  std::vector<char> buf(stripe);
  std::vector<NodeVector> data(static_cast<std::size_t>(params.k), NodeVector(params.ell));
  for (std::uint32_t s = 0; s < m.stripes; ++s) {
    std::fill(buf.begin(), buf.end(), 0);
    in.read(buf.data(), static_cast<std::streamsize>(stripe));
    for (std::size_t i = 0; i < data.size(); ++i)
      for (std::size_t a = 0; a < params.ell; ++a) data[i][a] = static_cast<unsigned char>(buf[i * params.ell + a]);
    const Codeword cw = encoder.encode(data);
    for (int i = 0; i < params.n; ++i) write_symbols(outs[static_cast<std::size_t>(i)], cw[static_cast<std::size_t>(i)], width);
  }
  for (auto& o : outs) {
    o.close();
    if (!o) throw Error("write failed in " + dir.string());
  }
  std::ofstream mf(dir / kManifestName);
  write_manifest(mf, m);
  if (!mf) throw Error("cannot write manifest in " + dir.string());
  return m;
}

void decode_file(const fs::path& dir, const fs::path& output) {
  const Manifest m = load_manifest(dir);
  const CodeParams params = manifest_params(m);
  const unsigned width = params.field.symbol_width();

  std::vector<std::unique_ptr<std::ifstream>> ins(static_cast<std::size_t>(params.n));
  std::vector<int> erased;
  for (int i = 0; i < params.n; ++i) {
    if (fs::exists(dir / m.chunks[static_cast<std::size_t>(i)])) {
      ins[static_cast<std::size_t>(i)] = open_chunk(dir, m, i, width);
    } else {
      erased.push_back(i);
    }
  }
  if (static_cast<int>(erased.size()) > params.r) {
    throw TooManyErasures(std::to_string(params.n - static_cast<int>(erased.size())) +
                          " chunks present, at least k = " + std::to_string(params.k) + " are needed");
  }

  const auto blocks = build_parity_blocks(params);
  const ErasureDecoder decoder(params, blocks, erased);
  const fs::path tmp = output.string() + ".part";
  std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot create " + output.string());

  std::uint64_t remaining = m.length;
  std::vector<char> bytes;
  for (std::uint32_t s = 0; s < m.stripes; ++s) {
    Codeword cw(static_cast<std::size_t>(params.n), params.ell);
    for (int i = 0; i < params.n; ++i)
      if (ins[static_cast<std::size_t>(i)]) read_symbols(*ins[static_cast<std::size_t>(i)], cw[static_cast<std::size_t>(i)], width, m.p);
    cw = decoder.decode(std::move(cw));
    bytes.clear();
    for (int i = 0; i < params.k; ++i) {
      for (auto v : cw[static_cast<std::size_t>(i)]) {
        if (v > 0xFF) throw FormatError("decoded symbol does not fit in a byte");
        bytes.push_back(static_cast<char>(v));
      }
    }
    const auto take = static_cast<std::size_t>(std::min<std::uint64_t>(remaining, bytes.size()));
    out.write(bytes.data(), static_cast<std::streamsize>(take));
    remaining -= take;
  }
  out.close();
  if (!out) throw Error("write failed for " + output.string());
  replace_file(tmp, output);
}

RepairStats repair_chunk(const fs::path& dir, int failed, std::span<const int> helpers) {
  const Manifest m = load_manifest(dir);
  const CodeParams params = manifest_params(m);
  const unsigned width = params.field.symbol_width();
  const auto blocks = build_parity_blocks(params);
  const Repairer repairer(params, blocks, failed, helpers);

  std::vector<std::unique_ptr<std::ifstream>> ins;
  for (int h : repairer.helpers()) ins.push_back(open_chunk(dir, m, h, width));

  const fs::path target = dir / m.chunks[static_cast<std::size_t>(failed)];
  const fs::path tmp = target.string() + ".part";
  std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot create " + target.string());
  write_chunk_header(out, expected_header(m, failed));

  RepairStats stats;
  stats.stripes = m.stripes;
  stats.symbols_per_stripe = repairer.helpers().size() * repairer.plan().request.size();
  stats.cut_set_bound = static_cast<std::size_t>(params.d) * params.ell / static_cast<std::size_t>(params.d - params.k + 1);

  NodeVector node(params.ell);
  std::vector<NodeVector> sent(ins.size());
  for (std::uint32_t s = 0; s < m.stripes; ++s) {
    for (std::size_t j = 0; j < ins.size(); ++j) {
      read_symbols(*ins[j], node, width, m.p);
      sent[j] = helper_response(params.field, repairer.plan(), node);
      stats.symbols_total += sent[j].size();
    }
    write_symbols(out, repairer.recover(sent), width);
  }
  out.close();
  if (!out) throw Error("write failed for " + target.string());
  replace_file(tmp, target);
  return stats;
}

}  // namespace msr
