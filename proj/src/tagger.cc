// Copyright 2026 The teigo Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "teigo/tagger.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "teigo/error.h"
#include "teigo/rng.h"
#include "teigo/unicode.h"

namespace teigo {

const char* ActionName(Action a) {
  switch (a) {
    case Action::kBegin: return "BEGIN";
    case Action::kIn: return "IN";
    case Action::kLast: return "LAST";
    case Action::kUnit: return "UNIT";
    case Action::kOut: return "OUT";
  }
  return "?";
}

bool ActionSet::empty() const { return size() == 0; }

size_t ActionSet::size() const {
  return static_cast<size_t>(std::count(mask_.begin(), mask_.end(), true));
}

std::vector<Action> ActionSet::actions() const {
  std::vector<Action> out;
  for (size_t a = 0; a < kNumActions; ++a) {
    if (mask_[a]) out.push_back(static_cast<Action>(a));
  }
  return out;
}

ActionSet ValidActions(const ParserState& state, size_t n_tokens) {
  if (state.position >= n_tokens) {
    throw Error(ErrorKind::kUsage,
                fmt::format("parser position {} past the last token ({} tokens)",
                            state.position, n_tokens));
  }
  return ActionSet(ValidActionMask(state.inside, state.position + 1 == n_tokens));
}

ParserState Step(const ParserState& state, Action action, size_t n_tokens) {
  if (!ValidActions(state, n_tokens).contains(action)) {
    throw Error(ErrorKind::kValidation,
                fmt::format("action {} is invalid at position {} ({})",
                            ActionName(action), state.position,
                            state.inside ? "inside" : "outside"));
  }
  ParserState next = state;
  switch (action) {
    case Action::kBegin:
      next.inside = true;
      next.entity_start = state.position;
      break;
    case Action::kLast:
    case Action::kUnit:
      next.inside = false;
      next.entity_start.reset();
      break;
    default:
      break;
  }
  next.emitted.push_back(ActionTag(action));
  ++next.position;
  return next;
}

TaggerModel MakeModel(const ModelShape& shape, uint64_t seed, std::string language) {
  TaggerModel model;
  model.language = language;
  model.tokenizer.language = std::move(language);
  model.context.window = shape.window;
  model.training_seed = seed;
  model.params.table =
      BloomTable(shape.rows, shape.dim, DeriveHashSeeds(seed, shape.hash_count));
  model.params.boundary.assign(model.params.table.token_width(), 0.0f);
  std::vector<size_t> sizes{model.input_size()};
  sizes.insert(sizes.end(), shape.hidden.begin(), shape.hidden.end());
  sizes.push_back(kNumActions);
  model.params.mlp = BasicMlp<float>::WithShape(sizes);
  return model;
}

void InitializeWeights(TaggerModel* model, uint64_t seed, float bloom_scale) {
  Rng rng(seed);
  for (float& w : model->params.table.weights()) {
    w = static_cast<float>(rng.Uniform(-bloom_scale, bloom_scale));
  }
  for (float& w : model->params.boundary) {
    w = static_cast<float>(rng.Uniform(-bloom_scale, bloom_scale));
  }
  for (auto& layer : model->params.mlp.layers) {
    const double limit = std::sqrt(6.0 / static_cast<double>(layer.in + layer.out));
    for (float& w : layer.weight) w = static_cast<float>(rng.Uniform(-limit, limit));
    std::fill(layer.bias.begin(), layer.bias.end(), 0.0f);
  }
}

DecodeResult GreedyDecode(const TaggerModel& model, const Tokenization& tokens) {
  if (!(tokens.tokenizer == model.tokenizer)) {
    throw Error(ErrorKind::kFormat,
                fmt::format("tokens come from tokenizer v{}/{} but the model "
                            "expects v{}/{}",
                            tokens.tokenizer.version, tokens.tokenizer.language,
                            model.tokenizer.version, model.tokenizer.language));
  }
  const auto& params = model.params;
  const size_t n = tokens.tokens.size();
  const size_t width = params.table.token_width();
  DecodeResult result;
  result.tags.reserve(n);

  std::vector<float> vectors(n * width);
  for (size_t i = 0; i < n; ++i) {
    params.table.Embed(params.table.Rows(tokens.tokens[i].surface),
                       vectors.data() + i * width);
  }

  const size_t ctx_width = ContextWidth(model.context, width);
  std::vector<float> input(ctx_width + kStateFeatures);
  MlpTrace<float> trace;
  bool inside = false;
  size_t entity_start = 0;
  for (size_t i = 0; i < n; ++i) {
    EncodeContext(std::span<const float>(vectors), width,
                  std::span<const float>(params.boundary), model.context, i,
                  input.data());
    const auto state = StateFeatures<float>(inside, i - entity_start);
    input[ctx_width] = state[0];
    input[ctx_width + 1] = state[1];
    MlpForward(params.mlp, std::span<const float>(input), &trace);
    ++result.scorer_calls;

    const std::vector<float>& scores = trace.activations.back();
    const ActionMask valid = ValidActionMask(inside, i + 1 == n);
    size_t best = kNumActions;
    for (size_t a = 0; a < kNumActions; ++a) {
      if (!valid[a]) continue;
      // Strict comparison keeps the lowest ordinal on ties; NaN scores
      // never displace a valid action.
      if (best == kNumActions || scores[a] > scores[best]) best = a;
    }
    const auto tag = static_cast<BiluoTag>(best);
    result.tags.push_back(tag);
    switch (tag) {
      case BiluoTag::kB: inside = true; entity_start = i; break;
      case BiluoTag::kL:
      case BiluoTag::kU: inside = false; break;
      default: break;
    }
  }
  result.token_spans = DecodeBiluo(result.tags);
  return result;
}

std::vector<TimexSpan> Tag(const TaggerModel& model, std::string_view text) {
  const std::u32string chars = unicode::Decode(text);
  Tokenization tokens{model.tokenizer, Tokenizer(model.tokenizer).Tokenize(chars)};
  const DecodeResult decoded = GreedyDecode(model, tokens);
  std::vector<TimexSpan> spans;
  spans.reserve(decoded.token_spans.size());
  for (const TokenSpan& s : decoded.token_spans) {
    spans.push_back(ToCharSpan(s, tokens.tokens, chars));
  }
  return spans;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

constexpr char kMagic[] = "TEIGO";
constexpr size_t kMagicSize = 5;

constexpr uint32_t FourCc(const char (&s)[5]) {
  return static_cast<uint32_t>(static_cast<uint8_t>(s[0])) |
         static_cast<uint32_t>(static_cast<uint8_t>(s[1])) << 8 |
         static_cast<uint32_t>(static_cast<uint8_t>(s[2])) << 16 |
         static_cast<uint32_t>(static_cast<uint8_t>(s[3])) << 24;
}

constexpr uint32_t kHeaderTag = FourCc("HEAD");
constexpr uint32_t kTokenizerTag = FourCc("TOKN");
constexpr uint32_t kBloomTag = FourCc("BLOM");
constexpr uint32_t kMlpTag = FourCc("MLPS");
constexpr uint32_t kMetaTag = FourCc("META");

uint32_t Checksum(std::string_view bytes) {
  uint32_t h = 2166136261u;
  for (char c : bytes) {
    h ^= static_cast<uint8_t>(c);
    h *= 16777619u;
  }
  return h;
}

class Writer {
 public:
  void U32(uint32_t v) { Le(v, 4); }
  void U64(uint64_t v) { Le(v, 8); }
  void I32(int32_t v) { U32(static_cast<uint32_t>(v)); }
  void F32(float v) { U32(std::bit_cast<uint32_t>(v)); }
  void Str(std::string_view s) {
    U32(static_cast<uint32_t>(s.size()));
    out_.append(s);
  }
  void Floats(std::span<const float> values) {
    for (float v : values) F32(v);
  }
  void Raw(std::string_view bytes) { out_.append(bytes); }
  std::string& bytes() { return out_; }

 private:
  void Le(uint64_t v, int n) {
    for (int i = 0; i < n; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  std::string out_;
};

class Reader {
 public:
  Reader(std::string_view bytes, std::string_view what) : bytes_(bytes), what_(what) {}

  uint32_t U32() { return static_cast<uint32_t>(Le(4)); }
  uint64_t U64() { return Le(8); }
  int32_t I32() { return static_cast<int32_t>(U32()); }
  float F32() { return std::bit_cast<float>(U32()); }
  std::string Str() {
    const uint32_t n = U32();
    return std::string(Take(n));
  }
  void Floats(std::span<float> out) {
    Need(out.size() * 4);
    for (float& v : out) v = F32();
  }
  std::string_view Take(size_t n) {
    Need(n);
    std::string_view s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  size_t remaining() const { return bytes_.size() - pos_; }
  void ExpectEnd() const {
    if (remaining() != 0) {
      throw Error(ErrorKind::kIntegrity,
                  fmt::format("model {}: {} trailing bytes", what_, remaining()));
    }
  }

 private:
  void Need(size_t n) const {
    if (n > remaining()) {
      throw Error(ErrorKind::kIntegrity,
                  fmt::format("model {}: truncated (need {} bytes, have {})", what_,
                              n, remaining()));
    }
  }
  uint64_t Le(int n) {
    Need(static_cast<size_t>(n));
    uint64_t v = 0;
    for (int i = 0; i < n; ++i) {
      v |= static_cast<uint64_t>(static_cast<uint8_t>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += static_cast<size_t>(n);
    return v;
  }

  std::string_view bytes_;
  std::string_view what_;
  size_t pos_ = 0;
};

void AppendSection(Writer* file, uint32_t tag, Writer& payload) {
  file->U32(tag);
  file->U64(payload.bytes().size());
  file->U32(Checksum(payload.bytes()));
  file->Raw(payload.bytes());
}

[[noreturn]] void FormatFail(const std::string& what) {
  throw Error(ErrorKind::kFormat, "model: " + what);
}

}  // namespace

std::string SaveModel(const TaggerModel& model) {
  Writer file;
  file.Raw(std::string_view(kMagic, kMagicSize));
  file.U32(model.format_version);
  file.U32(5);

  Writer head;
  head.Str(model.language);
  head.Str(model.hash_algorithm);
  head.U64(model.training_seed);
  AppendSection(&file, kHeaderTag, head);

  Writer tok;
  tok.U32(model.tokenizer.version);
  tok.Str(model.tokenizer.language);
  AppendSection(&file, kTokenizerTag, tok);

  const BloomTable& table = model.params.table;
  Writer bloom;
  bloom.U64(table.rows());
  bloom.U64(table.dim());
  bloom.U32(static_cast<uint32_t>(table.hash_count()));
  for (uint64_t s : table.seeds()) bloom.U64(s);
  bloom.U64(model.context.window);
  bloom.Floats(table.weights());
  bloom.Floats(model.params.boundary);
  AppendSection(&file, kBloomTag, bloom);

  Writer mlp;
  mlp.U32(static_cast<uint32_t>(model.params.mlp.layers.size()));
  for (const auto& layer : model.params.mlp.layers) {
    mlp.U64(layer.in);
    mlp.U64(layer.out);
    mlp.Floats(layer.weight);
    mlp.Floats(layer.bias);
  }
  AppendSection(&file, kMlpTag, mlp);

  Writer meta;
  meta.Str(model.metadata.mix_mode);
  meta.I32(model.metadata.config_id);
  AppendSection(&file, kMetaTag, meta);

  return std::move(file.bytes());
}

TaggerModel LoadModel(std::string_view bytes) {
  if (bytes.size() < kMagicSize || bytes.substr(0, kMagicSize) != kMagic) {
    FormatFail("missing TEIGO magic");
  }
  Reader file(bytes.substr(kMagicSize), "header");
  TaggerModel model;
  model.format_version = file.U32();
  if (model.format_version != TaggerModel::kFormatVersion) {
    FormatFail(fmt::format("unsupported format version {}", model.format_version));
  }
  const uint32_t n_sections = file.U32();
  if (n_sections != 5) FormatFail(fmt::format("expected 5 sections, found {}", n_sections));

  auto section = [&](uint32_t expected, const char* name) {
    const uint32_t tag = file.U32();
    const uint64_t length = file.U64();
    const uint32_t checksum = file.U32();
    if (tag != expected) FormatFail(fmt::format("expected section {}", name));
    if (length > file.remaining()) {
      throw Error(ErrorKind::kIntegrity,
                  fmt::format("model section {}: truncated ({} of {} bytes)", name,
                              file.remaining(), length));
    }
    const std::string_view payload = file.Take(static_cast<size_t>(length));
    if (Checksum(payload) != checksum) {
      throw Error(ErrorKind::kIntegrity,
                  fmt::format("model section {}: checksum mismatch", name));
    }
    return Reader(payload, name);
  };

  Reader head = section(kHeaderTag, "HEAD");
  model.language = head.Str();
  model.hash_algorithm = head.Str();
  model.training_seed = head.U64();
  head.ExpectEnd();
  if (model.hash_algorithm != kHashAlgorithm) {
    FormatFail(fmt::format("unsupported hash algorithm '{}'", model.hash_algorithm));
  }

  Reader tok = section(kTokenizerTag, "TOKN");
  model.tokenizer.version = tok.U32();
  model.tokenizer.language = tok.Str();
  tok.ExpectEnd();
  if (model.tokenizer.version != TokenizerConfig::kCurrentVersion) {
    FormatFail(fmt::format("unsupported tokenizer version {}", model.tokenizer.version));
  }

  Reader bloom = section(kBloomTag, "BLOM");
  const uint64_t rows = bloom.U64();
  const uint64_t dim = bloom.U64();
  const uint32_t k = bloom.U32();
  if (rows == 0 || dim == 0 || k == 0 || k > kMaxHashes ||
      rows * dim * 4 > bloom.remaining()) {
    throw Error(ErrorKind::kIntegrity, "model section BLOM: inconsistent table shape");
  }
  std::vector<uint64_t> seeds(k);
  for (uint64_t& s : seeds) s = bloom.U64();
  model.context.window = bloom.U64();
  try {
    model.params.table = BloomTable(rows, dim, std::move(seeds));
  } catch (const Error& e) {
    FormatFail(e.what());
  }
  bloom.Floats(model.params.table.weights());
  model.params.boundary.resize(model.params.table.token_width());
  bloom.Floats(model.params.boundary);
  bloom.ExpectEnd();

  Reader mlp = section(kMlpTag, "MLPS");
  const uint32_t n_layers = mlp.U32();
  if (n_layers == 0) FormatFail("scorer has no layers");
  for (uint32_t l = 0; l < n_layers; ++l) {
    DenseLayer<float> layer;
    layer.in = mlp.U64();
    layer.out = mlp.U64();
    if (layer.in * layer.out * 4 > mlp.remaining()) {
      throw Error(ErrorKind::kIntegrity, "model section MLPS: truncated layer");
    }
    layer.weight.resize(layer.in * layer.out);
    layer.bias.resize(layer.out);
    mlp.Floats(layer.weight);
    mlp.Floats(layer.bias);
    model.params.mlp.layers.push_back(std::move(layer));
  }
  mlp.ExpectEnd();
  const auto& layers = model.params.mlp.layers;
  for (size_t l = 1; l < layers.size(); ++l) {
    if (layers[l].in != layers[l - 1].out) FormatFail("scorer layer sizes disagree");
  }
  if (layers.front().in != model.input_size() || layers.back().out != kNumActions) {
    FormatFail("scorer shape does not match the encoder");
  }

  Reader meta = section(kMetaTag, "META");
  model.metadata.mix_mode = meta.Str();
  model.metadata.config_id = meta.I32();
  meta.ExpectEnd();
  file.ExpectEnd();
  return model;
}

void SaveModelFile(const TaggerModel& model, const std::string& path) {
  const std::string bytes = SaveModel(model);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::kIo, fmt::format("cannot write '{}'", path));
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorKind::kIo, fmt::format("write failed for '{}'", path));
  }
  std::filesystem::rename(tmp, path);
}

TaggerModel LoadModelFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, fmt::format("cannot open model '{}'", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return LoadModel(buffer.str());
}

}  // namespace teigo
