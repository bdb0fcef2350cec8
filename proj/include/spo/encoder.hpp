#pragma once
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "spo/matrix.hpp"

namespace spo {

using TokenId = std::uint32_t;

// Frozen hashing bag-of-embeddings text encoder. Stands in for a pretrained
// encoder: fully determined by (vocab_size, dim, seed) or by a loaded
// vectors file, and never trained. Two builds with equal inputs are
// bit-identical.
struct EncoderTable {
  std::size_t vocab_size = 0;
  std::size_t dim = 0;
  std::uint64_t seed = 0;
  Matrix table;  // vocab_size x dim, frozen
  std::string source = "seed";       // "seed" or the vectors-file path
  std::uint64_t file_digest = 0;     // FNV-1a of the file bytes when source is a path
};

struct EncoderSpec {
  std::uint64_t seed = 0;
  std::size_t vocab_size = 4096;
  std::size_t dim = 64;
};

// Lowercase (ASCII), split on every non-alphanumeric byte, drop empties,
// map each token to FNV-1a(token) mod vocab_size.
std::vector<TokenId> tokenize(std::string_view text, std::size_t vocab_size);

// Mean of the selected embedding rows. ids must be non-empty and < vocab_size.
Matrix encode(const std::vector<TokenId>& ids, const EncoderTable& table);

// Seeded build: entries drawn Normal(0, 1/sqrt(dim)).
EncoderTable build_encoder(const EncoderSpec& spec);

// File build: word2vec text format, header "count dim" then "token v1 .. v_dim"
// lines. Rows are seeded first, then each file token overwrites its hashed
// row (last write wins, file order). The file dim must equal spec.dim.
EncoderTable build_encoder(const EncoderSpec& spec, const std::string& vectors_path);

}  // namespace spo
