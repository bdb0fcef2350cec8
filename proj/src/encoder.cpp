#include "spo/encoder.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "spo/error.hpp"
#include "spo/hash.hpp"
#include "spo/rng.hpp"

namespace spo {

namespace {

bool is_token_char(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

char fold(unsigned char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c);
}

void check_spec(const EncoderSpec& spec) {
  if (spec.vocab_size < 2) throw ConfigError("encoder: vocab size must be >= 2");
  if (spec.dim < 1) throw ConfigError("encoder: dim must be >= 1");
}

}  // namespace

std::vector<TokenId> tokenize(std::string_view text, std::size_t vocab_size) {
  std::vector<TokenId> ids;
  std::string token;
  auto flush = [&] {
    if (!token.empty()) {
      ids.push_back(static_cast<TokenId>(fnv1a64(token) % vocab_size));
      token.clear();
    }
  };
  for (unsigned char c : text) {
    if (is_token_char(c)) {
      token.push_back(fold(c));
    } else {
      flush();
    }
  }
  flush();
  return ids;
}

Matrix encode(const std::vector<TokenId>& ids, const EncoderTable& table) {
  if (ids.empty()) throw UsageError("encode: empty token list");
  Matrix h(1, table.dim);
  for (TokenId id : ids) {
    if (id >= table.vocab_size) {
      throw IndexError("encode: token id " + std::to_string(id) + " >= vocab size " +
                       std::to_string(table.vocab_size));
    }
    for (std::size_t j = 0; j < table.dim; ++j) h.at(0, j) += table.table.at(id, j);
  }
  const double inv = 1.0 / static_cast<double>(ids.size());
  for (std::size_t j = 0; j < table.dim; ++j) h.at(0, j) *= inv;
  return h;
}

EncoderTable build_encoder(const EncoderSpec& spec) {
  check_spec(spec);
  EncoderTable t;
  t.vocab_size = spec.vocab_size;
  t.dim = spec.dim;
  t.seed = spec.seed;
  t.table = Matrix(spec.vocab_size, spec.dim);
  Rng rng(spec.seed);
  const double sigma = 1.0 / std::sqrt(static_cast<double>(spec.dim));
  for (std::size_t i = 0; i < t.table.size(); ++i) t.table[i] = rng.normal(sigma);
  return t;
}

EncoderTable build_encoder(const EncoderSpec& spec, const std::string& vectors_path) {
  EncoderTable t = build_encoder(spec);
  std::ifstream in(vectors_path, std::ios::binary);
  if (!in) throw IoError("encoder: cannot open vectors file " + vectors_path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string bytes = buf.str();
  t.source = vectors_path;
  t.file_digest = fnv1a64(bytes);

  std::istringstream lines(bytes);
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(lines, line)) throw ParseError("vectors file line 1: missing header");
  ++line_no;
  std::istringstream header(line);
  std::size_t count = 0, dim = 0;
  if (!(header >> count >> dim)) {
    throw ParseError("vectors file line 1: expected header \"count dim\"");
  }
  std::string extra;
  if (header >> extra) throw ParseError("vectors file line 1: trailing content after header");
  if (dim != spec.dim) {
    throw FormatError("vectors file: dim " + std::to_string(dim) + " does not match configured " +
                      std::to_string(spec.dim));
  }

  for (std::size_t k = 0; k < count; ++k) {
    if (!std::getline(lines, line)) {
      throw ParseError("vectors file line " + std::to_string(line_no + 1) +
                       ": expected a token line, got end of file");
    }
    ++line_no;
    std::istringstream fields(line);
    std::string token;
    if (!(fields >> token)) {
      throw ParseError("vectors file line " + std::to_string(line_no) + ": empty line");
    }
    std::vector<double> vec(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      if (!(fields >> vec[j])) {
        throw ParseError("vectors file line " + std::to_string(line_no) +
                         ": expected " + std::to_string(dim) + " vector components");
      }
    }
    if (fields >> extra) {
      throw ParseError("vectors file line " + std::to_string(line_no) +
                       ": trailing content after " + std::to_string(dim) + " components");
    }
    const std::size_t rid = static_cast<std::size_t>(fnv1a64(token) % spec.vocab_size);
    for (std::size_t j = 0; j < dim; ++j) t.table.at(rid, j) = vec[j];
  }
  while (std::getline(lines, line)) {
    ++line_no;
    if (!line.empty() && line.find_first_not_of(" \t\r") != std::string::npos) {
      throw ParseError("vectors file line " + std::to_string(line_no) +
                       ": unexpected content after " + std::to_string(count) + " entries");
    }
  }
  if (!t.table.all_finite()) throw NumericError("vectors file: non-finite vector component");
  return t;
}

}  // namespace spo
