// Copyright 2026 The codec-lens Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <glob.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "codec_lens/analysis.h"
#include "codec_lens/basis_io.h"
#include "codec_lens/entropy.h"
#include "codec_lens/error.h"
#include "codec_lens/image_io.h"
#include "codec_lens/linear_transforms.h"
#include "codec_lens/nn.h"
#include "codec_lens/parallel.h"
#include "codec_lens/random.h"
#include "codec_lens/render.h"
#include "codec_lens/similarity.h"
#include "codec_lens/toy.h"
#include "codec_lens/weights.h"

namespace codec_lens::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Carries the exit code and the failing stage to the top level.
class CommandError : public std::runtime_error {
 public:
  CommandError(int code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

CommandError Usage(const std::string& message) { return CommandError(kExitUsage, message); }

template <typename F>
auto Stage(const std::string& name, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const CommandError&) {
    throw;
  } catch (const std::exception& e) {
    throw CommandError(kExitUsage, name + ": " + e.what());
  }
}

struct Options {
  std::string weights;
  std::string analysis_weights;
  std::string decoder;
  std::string images;
  std::string image;
  std::string out;
  std::string amplitudes;
  std::string scale_mode;
  std::string basis;
  std::string reference;
  bool quantize = false;
  bool offset_free = false;
  bool corrupt_weights = false;
  bool linear = false;
  std::size_t spatial_subset = 1;
  std::size_t columns = 8;
  std::size_t top = 0;
  std::size_t tile_size = 0;
  std::size_t latent_channels = 8;
  std::size_t image_channels = 3;
  std::uint64_t seed = 0;
};

bool IsImageFile(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".pgm" || ext == ".ppm" || ext == ".pnm";
}

// A directory expands to the image files it contains; anything else is a
// POSIX glob pattern.
std::vector<fs::path> ExpandImages(const std::string& pattern) {
  std::vector<fs::path> paths;
  if (fs::is_directory(pattern)) {
    for (const auto& entry : fs::directory_iterator(pattern)) {
      if (entry.is_regular_file() && IsImageFile(entry.path())) paths.push_back(entry.path());
    }
  } else {
    glob_t g{};
    const int rc = ::glob(pattern.c_str(), 0, nullptr, &g);
    if (rc == 0) {
      for (std::size_t i = 0; i < g.gl_pathc; ++i) paths.emplace_back(g.gl_pathv[i]);
    }
    globfree(&g);
    if (rc != 0 && rc != GLOB_NOMATCH) throw Usage("--images: cannot expand '" + pattern + "'");
  }
  std::sort(paths.begin(), paths.end());
  if (paths.empty()) throw Usage("--images: no files match '" + pattern + "'");
  return paths;
}

std::vector<ImagePlane> LoadImages(const std::vector<fs::path>& paths) {
  std::vector<ImagePlane> images;
  for (const fs::path& p : paths) {
    images.push_back(Stage("reading " + p.string(), [&] { return read_image(p); }));
  }
  return images;
}

void RequireFile(const std::string& flag, const std::string& path) {
  if (path.empty()) throw Usage(flag + " is required");
  if (!fs::is_regular_file(path)) throw Usage(flag + ": file not found: " + path);
}

fs::path PrepareOut(const Options& o, bool required) {
  if (o.out.empty()) {
    if (required) throw Usage("--out is required");
    return {};
  }
  std::error_code ec;
  fs::create_directories(o.out, ec);
  if (ec || !fs::is_directory(o.out)) throw Usage("--out: cannot create directory " + o.out);
  return o.out;
}

// Decoder plus the matching encoder when one is available.
struct Codec {
  std::unique_ptr<Decoder> decoder;
  const LinearBlockDecoder* linear = nullptr;
  std::optional<AnalysisNet> analysis;

  bool can_encode() const { return linear != nullptr || analysis.has_value(); }
  std::size_t scale() const { return decoder->scale_factor(); }

  Tensor3 encode(const ImagePlane& img, const std::string& label, std::ostream& err) const {
    const std::size_t s = scale();
    if (img.height() % s != 0 || img.width() % s != 0) {
      err << "warning: " << label << " is " << img.height() << "x" << img.width()
          << ", edge-padding to a multiple of " << s << "\n";
    }
    if (linear != nullptr) return linear->encode(img.pixels());
    return run_analysis(*analysis, pad_to_multiple(img.pixels(), s));
  }
};

Codec LoadCodec(const Options& o, bool need_encoder) {
  Codec codec;
  if (!o.decoder.empty()) {
    if (!o.weights.empty() || !o.analysis_weights.empty()) {
      throw Usage("--decoder cannot be combined with --weights/--analysis-weights");
    }
    auto linear = Stage("decoder", [&] { return make_builtin_decoder(o.decoder); });
    codec.linear = linear.get();
    codec.decoder = std::move(linear);
    return codec;
  }
  if (o.weights.empty()) throw Usage("either --decoder or --weights is required");
  RequireFile("--weights", o.weights);
  if (!o.analysis_weights.empty()) RequireFile("--analysis-weights", o.analysis_weights);
  if (need_encoder && o.analysis_weights.empty()) {
    throw Usage("--analysis-weights is required with --weights for this command");
  }
  codec.decoder = Stage("loading " + o.weights, [&] {
    return std::make_unique<NetworkDecoder>(SynthesisNet(load_weights_file(o.weights)),
                                            fs::path(o.weights).filename().string());
  });
  if (!o.analysis_weights.empty()) {
    codec.analysis = Stage("loading " + o.analysis_weights,
                           [&] { return AnalysisNet(load_weights_file(o.analysis_weights)); });
    if (codec.analysis->latent_channels() != codec.decoder->latent_channels()) {
      throw Usage("analysis net produces " + std::to_string(codec.analysis->latent_channels()) +
                  " channels, synthesis net expects " +
                  std::to_string(codec.decoder->latent_channels()));
    }
  }
  return codec;
}

std::vector<Tensor3> EncodeAll(const Codec& codec, const std::vector<fs::path>& paths,
                               const std::vector<ImagePlane>& images, std::ostream& err) {
  std::vector<Tensor3> latents;
  for (std::size_t k = 0; k < images.size(); ++k) {
    latents.push_back(Stage("encoding " + paths[k].string(),
                            [&] { return codec.encode(images[k], paths[k].string(), err); }));
  }
  return latents;
}

void WriteJson(const fs::path& path, const json& j) {
  write_file_atomic(path, j.dump(2) + "\n");
}

void Emit(std::ostream& out, const fs::path& dir, const std::string& name, const json& j) {
  if (!dir.empty()) Stage("writing " + name, [&] { WriteJson(dir / name, j); });
  out << j.dump(2) << "\n";
}

ScaleMode ScaleOr(const Options& o, ScaleMode fallback) {
  if (o.scale_mode.empty()) return fallback;
  return Stage("--scale-mode", [&] { return parse_scale_mode(o.scale_mode); });
}

int CmdBasis(const Options& o, std::ostream& out, std::ostream& err) {
  const Codec codec = LoadCodec(o, false);
  const fs::path dir = PrepareOut(o, true);
  std::vector<fs::path> paths;
  std::vector<ImagePlane> images;
  if (!o.images.empty()) {
    paths = ExpandImages(o.images);
    images = LoadImages(paths);
  }
  std::string mode_name = o.amplitudes.empty() ? (images.empty() ? "unit" : "kodak-max") : o.amplitudes;
  AmplitudeMode mode;
  if (mode_name == "kodak-max") {
    mode = AmplitudeMode::kSignedMax;
  } else if (mode_name == "abs-max") {
    mode = AmplitudeMode::kAbsMax;
  } else if (mode_name == "unit") {
    mode = AmplitudeMode::kUnit;
  } else {
    throw Usage("--amplitudes must be kodak-max, unit or abs-max");
  }
  std::vector<Tensor3> latents;
  if (!images.empty()) {
    if (!codec.can_encode()) throw Usage("--images needs --analysis-weights to encode");
    latents = EncodeAll(codec, paths, images, err);
  }
  std::vector<double> k(codec.decoder->latent_channels(), 1.0);
  if (mode != AmplitudeMode::kUnit) {
    if (latents.empty()) throw Usage("--amplitudes " + mode_name + " needs --images");
    const Amplitudes a = Stage("amplitudes", [&] { return amplitudes_from_latents(latents, mode); });
    for (const std::string& w : a.warnings) err << "warning: " << w << "\n";
    k = a.values;
  }
  ExtractOptions extract;
  extract.offset_free = o.offset_free;
  BasisSet basis = Stage("extract_basis", [&] { return extract_basis(*codec.decoder, k, extract); });
  if (!latents.empty()) {
    const ChannelRateReport rates =
        Stage("rates", [&] { return estimate_rates_from_latents(latents, codec.scale()); });
    attach_ranks(basis, rates);
  }
  GridLayout layout;
  layout.columns = o.columns;
  layout.tile_size = o.tile_size ? o.tile_size : 16;
  layout.scale = ScaleOr(o, ScaleMode::kSymmetricZero);
  Stage("rendering", [&] {
    layout.Validate();
    save_basis_set(dir, basis);
    write_file_atomic(dir / "grid.png", render_basis_grid(basis, layout, o.top));
    return 0;
  });
  json summary = {{"decoder", basis.decoder_name},
                  {"channels", basis.size()},
                  {"amplitudes", mode_name},
                  {"offset_free", basis.offset_free},
                  {"ranked", !latents.empty()},
                  {"images", paths.size()},
                  {"grid", "grid.png"},
                  {"index", "index.json"},
                  {"layout", layout.Describe()}};
  out << summary.dump(2) << "\n";
  return kExitOk;
}

int CmdDecompose(const Options& o, std::ostream& out, std::ostream& err) {
  const Codec codec = LoadCodec(o, true);
  const fs::path dir = PrepareOut(o, true);
  fs::path path;
  if (!o.image.empty()) {
    if (!fs::is_regular_file(o.image)) throw Usage("--image: file not found: " + o.image);
    path = o.image;
  } else if (!o.images.empty()) {
    const auto paths = ExpandImages(o.images);
    if (paths.size() > 1) err << "note: decomposing the first of " << paths.size() << " matches\n";
    path = paths.front();
  } else {
    throw Usage("--image is required");
  }
  const ImagePlane img = LoadImages({path}).front();
  Tensor3 z = Stage("encoding " + path.string(), [&] { return codec.encode(img, path.string(), err); });
  if (o.quantize) z = quantize(z);
  const OffsetFreeDecoder decoder(*codec.decoder);

  auto decode_all = [&](const std::vector<Tensor3>& parts) {
    std::vector<Tensor3> decoded(parts.size());
    parallel_for(parts.size(), [&](std::size_t k) { decoded[k] = decoder.decode(parts[k]); });
    return decoded;
  };
  const Tensor3 joint = Stage("decoding", [&] { return decoder.decode(z); });
  const std::vector<Tensor3> spatial = Stage("spatial decomposition", [&] { return decode_all(spatial_components(z)); });
  std::vector<Tensor3> channel = Stage("channel decomposition", [&] { return decode_all(channel_components(z)); });
  const ChannelRateReport rates = estimate_rates_from_latents({z}, codec.scale());

  auto sum = [&](const std::vector<Tensor3>& parts) {
    Tensor3 total = zeros_like(joint);
    for (const Tensor3& p : parts) accumulate(total, p);
    return total;
  };
  const Tensor3 sum_channel = sum(channel);
  const Tensor3 sum_spatial = sum(spatial);
  std::vector<Tensor3> ordered;
  for (std::size_t i : rates.ranking) ordered.push_back(channel[i]);

  GridLayout layout;
  layout.tile_size = o.tile_size ? o.tile_size : std::max<std::size_t>(16, std::max(joint.height(), joint.width()));
  layout.scale = ScaleOr(o, ScaleMode::kMinMax);
  layout.labels = LabelMode::kNone;
  Stage("rendering", [&] {
    GridLayout spatial_layout = layout;
    spatial_layout.columns = z.width();
    write_file_atomic(dir / "spatial_mosaic.png", render_decomposition_mosaic(spatial, spatial_layout));
    GridLayout channel_layout = layout;
    channel_layout.columns = o.columns;
    channel_layout.labels = LabelMode::kRank;
    write_file_atomic(dir / "channel_mosaic.png", render_decomposition_mosaic(ordered, channel_layout));
    GridLayout single = layout;
    single.columns = 1;
    write_file_atomic(dir / "joint.png", render_decomposition_mosaic({joint}, single));
    GridLayout triple = layout;
    triple.columns = 3;
    write_file_atomic(dir / "comparison.png",
                      render_decomposition_mosaic({sum_channel, sum_spatial, joint}, triple));
    return 0;
  });
  json summary = {{"image", path.string()},
                  {"latent_shape", {z.channels(), z.height(), z.width()}},
                  {"quantized", o.quantize},
                  {"spatial_tiles", spatial.size()},
                  {"channel_tiles", ordered.size()},
                  {"channel_order", rates.ranking},
                  {"mse_channel", mse(joint, sum_channel)},
                  {"mse_spatial", mse(joint, sum_spatial)},
                  {"files", {"spatial_mosaic.png", "channel_mosaic.png", "joint.png", "comparison.png"}},
                  {"comparison_order", {"channel_sum", "spatial_sum", "joint"}}};
  Emit(out, dir, "decompose.json", summary);
  return kExitOk;
}

int CmdSeparability(const Options& o, std::ostream& out, std::ostream& err) {
  const Codec codec = LoadCodec(o, true);
  if (o.images.empty()) throw Usage("--images is required");
  const fs::path dir = PrepareOut(o, false);
  const auto paths = ExpandImages(o.images);
  const auto latents = EncodeAll(codec, paths, LoadImages(paths), err);
  SeparabilityOptions options;
  options.spatial_subset = o.spatial_subset;
  options.quantize = o.quantize;
  const SeparabilityReport report =
      Stage("separability", [&] { return separability(*codec.decoder, latents, options); });
  json j = to_json(report);
  j["decoder"] = codec.decoder->name();
  for (std::size_t k = 0; k < paths.size(); ++k) j["per_image"][k]["image"] = paths[k].string();
  Emit(out, dir, "separability.json", j);
  return kExitOk;
}

int CmdRates(const Options& o, std::ostream& out, std::ostream& err) {
  Codec codec;
  if (!o.decoder.empty()) {
    codec = LoadCodec(o, true);
  } else {
    RequireFile("--analysis-weights", o.analysis_weights);
    codec.analysis = Stage("loading " + o.analysis_weights,
                           [&] { return AnalysisNet(load_weights_file(o.analysis_weights)); });
  }
  if (o.images.empty()) throw Usage("--images is required");
  const fs::path dir = PrepareOut(o, false);
  const auto paths = ExpandImages(o.images);
  const auto images = LoadImages(paths);
  ChannelRateReport report;
  if (codec.analysis) {
    report = Stage("rates", [&] { return estimate_rates(*codec.analysis, images); });
  } else {
    const auto latents = EncodeAll(codec, paths, images, err);
    report = Stage("rates", [&] { return estimate_rates_from_latents(latents, codec.scale()); });
  }
  Emit(out, dir, "rates.json", to_json(report));
  return kExitOk;
}

// Reference basis named by --reference, sized to the basis tiles.
std::vector<Tensor3> ReferenceImages(const std::string& ref, const Shape3& tile,
                                     std::string& description) {
  if (ref == "dct" || ref == "wht" || ref == "haar") {
    if (tile.height != tile.width) throw Usage("--reference " + ref + " needs square basis tiles");
    const std::size_t n = tile.height;
    const OrthogonalTransform t = Stage("reference", [&] {
      return ref == "dct" ? dct_matrix(n) : ref == "wht" ? wht_matrix(n) : haar_matrix(n);
    });
    description = ref + ":" + std::to_string(n);
    return basis_2d(t).images;
  }
  if (ref.rfind("klt:", 0) == 0) {
    const std::string source = ref.substr(4);
    if (tile.height != tile.width) throw Usage("--reference klt needs square basis tiles");
    const std::size_t n = tile.height;
    std::vector<std::vector<double>> patches;
    for (const ImagePlane& img : LoadImages(ExpandImages(source))) {
      auto p = extract_patches(channel_mean(img.pixels()), n);
      patches.insert(patches.end(), p.begin(), p.end());
    }
    const Klt klt = Stage("reference", [&] { return klt_decompose(patches); });
    std::vector<Tensor3> images;
    for (std::size_t r = 0; r < klt.transform.dim(); ++r) {
      const auto row = klt.transform.row(r);
      images.emplace_back(Shape3{1, n, n}, std::vector<double>(row.begin(), row.end()));
    }
    description = "klt:" + std::to_string(n) + " from " + std::to_string(patches.size()) + " patches";
    return images;
  }
  if (fs::is_directory(ref)) {
    description = ref;
    return basis_images(Stage("loading " + ref, [&] { return load_basis_set(ref); }));
  }
  throw Usage("--reference must be dct, wht, haar, klt:<images> or a basis directory; got '" +
              ref + "'");
}

int CmdCompare(const Options& o, std::ostream& out, std::ostream&) {
  if (o.basis.empty()) throw Usage("--basis is required");
  if (o.reference.empty()) throw Usage("--reference is required");
  if (!fs::is_directory(o.basis)) throw Usage("--basis: directory not found: " + o.basis);
  const fs::path dir = PrepareOut(o, false);
  const BasisSet basis = Stage("loading " + o.basis, [&] { return load_basis_set(o.basis); });
  const std::vector<Tensor3> images = basis_images(basis);
  std::string description;
  const std::vector<Tensor3> reference = ReferenceImages(o.reference, images.front().shape(), description);
  const SimilarityReport report =
      Stage("similarity", [&] { return basis_similarity(images, reference); });
  json j = to_json(report);
  j["basis"] = o.basis;
  j["reference"] = description;
  Emit(out, dir, "compare.json", j);
  return kExitOk;
}

struct Check {
  std::string name;
  std::function<std::optional<std::string>()> run;
};

std::vector<Check> SelfTestChecks(const Options& o) {
  const std::uint64_t seed = o.seed;
  std::vector<Check> checks;
  checks.push_back({"weights-format", [seed, corrupt = o.corrupt_weights]() -> std::optional<std::string> {
    auto bytes = save_weights(make_toy_coder(seed).synthesis.network());
    if (corrupt) bytes[0] ^= 0xFF;
    try {
      if (save_weights(load_weights(bytes)) != bytes) return "re-save differs";
    } catch (const WeightFormatError& e) {
      return std::string(e.what());
    }
    return std::nullopt;
  }});
  checks.push_back({"partition-identity", [seed]() -> std::optional<std::string> {
    Rng rng(seed);
    for (int t = 0; t < 50; ++t) {
      const Shape3 shape{static_cast<std::size_t>(rng.integer(1, 6)),
                         static_cast<std::size_t>(rng.integer(1, 6)),
                         static_cast<std::size_t>(rng.integer(1, 6))};
      const Tensor3 z = rng.normal_tensor(shape);
      Tensor3 spatial(shape), channel(shape);
      for (const Tensor3& c : spatial_components(z)) accumulate(spatial, c);
      for (const Tensor3& c : channel_components(z)) accumulate(channel, c);
      if (!(spatial == z) || !(channel == z)) return "sum differs for " + shape.ToString();
    }
    return std::nullopt;
  }});
  checks.push_back({"linear-oracle", [seed]() -> std::optional<std::string> {
    Rng rng(seed + 1);
    for (const char* spec : {"dct:4", "wht:4", "haar:4"}) {
      const auto dec = make_builtin_decoder(spec);
      std::vector<Tensor3> latents;
      for (int i = 0; i < 3; ++i) latents.push_back(rng.normal_tensor({16, 4, 4}));
      SeparabilityOptions options;
      options.spatial_subset = 0;
      const SeparabilityReport r = separability(*dec, latents, options);
      if (r.mse_channel > 1e-9 || r.mse_spatial > 1e-9) {
        std::ostringstream s;
        s << spec << " mse_channel=" << r.mse_channel << " mse_spatial=" << r.mse_spatial;
        return s.str();
      }
    }
    return std::nullopt;
  }});
  checks.push_back({"adjoint", [seed]() -> std::optional<std::string> {
    Rng rng(seed + 2);
    LayerSpec l;
    l.kind = LayerKind::kConv;
    l.in_channels = 3;
    l.out_channels = 4;
    l.kernel_h = l.kernel_w = 5;
    l.stride = 2;
    l.padding = 2;
    l.weight = {{4, 3, 5, 5}, {}};
    for (int i = 0; i < 4 * 3 * 25; ++i) l.weight.values.push_back(rng.normal());
    LayerSpec t = l;
    t.kind = LayerKind::kTConv;
    t.in_channels = 4;
    t.out_channels = 3;
    t.output_padding = 1;
    const Tensor3 x = rng.normal_tensor({3, 12, 12});
    const Tensor3 y = rng.normal_tensor({4, 6, 6});
    const Tensor3 cx = conv2d(x, l), ty = tconv2d(y, t);
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t i = 0; i < cx.size(); ++i) lhs += cx.data()[i] * y.data()[i];
    for (std::size_t i = 0; i < x.size(); ++i) rhs += x.data()[i] * ty.data()[i];
    if (std::abs(lhs - rhs) > 1e-10) return "inner products differ by " + std::to_string(std::abs(lhs - rhs));
    return std::nullopt;
  }});
  checks.push_back({"shift-equivariance", [seed]() -> std::optional<std::string> {
    const Network lin = linear_part(make_toy_coder(seed).synthesis.network());
    const std::size_t s = lin.scale_factor();
    const std::size_t c = lin.input_channels();
    Tensor3 a(c, 8, 8), b(c, 8, 8);
    a(0, 3, 3) = 1.0;
    b(0, 4, 3) = 1.0;
    const Tensor3 ya = lin.forward(a), yb = lin.forward(b);
    const std::size_t margin = 12;
    for (std::size_t ch = 0; ch < ya.channels(); ++ch) {
      for (std::size_t y = margin; y + margin + s < ya.height(); ++y) {
        for (std::size_t x = margin; x + margin < ya.width(); ++x) {
          if (std::abs(yb(ch, y + s, x) - ya(ch, y, x)) > 1e-9) return "interior pixels differ";
        }
      }
    }
    return std::nullopt;
  }});
  return checks;
}

int CmdSelfTest(const Options& o, std::ostream& out, std::ostream& err) {
  int code = kExitOk;
  for (const Check& check : SelfTestChecks(o)) {
    std::optional<std::string> failure;
    try {
      failure = check.run();
    } catch (const std::exception& e) {
      failure = e.what();
    }
    if (failure) {
      out << "FAIL " << check.name << ": " << *failure << "\n";
      if (code == kExitOk) err << "selftest failed: " << check.name << ": " << *failure << "\n";
      code = kExitPropertyFailure;
    } else {
      out << "PASS " << check.name << "\n";
    }
  }
  out << (code == kExitOk ? "selftest passed" : "selftest failed") << " (seed " << o.seed << ")\n";
  return code;
}

int CmdMakeToy(const Options& o, std::ostream& out, std::ostream&) {
  const fs::path dir = PrepareOut(o, true);
  ToyOptions options;
  options.latent_channels = o.latent_channels;
  options.image_channels = o.image_channels;
  options.nonlinear = !o.linear;
  options.zero_bias = o.linear;
  if (options.image_channels != 1 && options.image_channels != 3) {
    throw Usage("--image-channels must be 1 or 3");
  }
  const ToyCoder toy = Stage("make-toy", [&] { return make_toy_coder(o.seed, options); });
  Stage("writing weights", [&] {
    save_weights_file(dir / "analysis.licw", toy.analysis.network());
    save_weights_file(dir / "synthesis.licw", toy.synthesis.network());
    return 0;
  });
  out << json{{"analysis", (dir / "analysis.licw").string()},
              {"synthesis", (dir / "synthesis.licw").string()},
              {"latent_channels", options.latent_channels},
              {"scale_factor", toy.synthesis.scale_factor()},
              {"nonlinear", options.nonlinear}}
             .dump(2)
      << "\n";
  return kExitOk;
}

void AddDecoderFlags(CLI::App* cmd, Options& o) {
  cmd->add_option("--weights", o.weights, "Synthesis weights (LICW)");
  cmd->add_option("--analysis-weights", o.analysis_weights, "Analysis weights (LICW)");
  cmd->add_option("--decoder", o.decoder, "Built-in linear decoder: dct:N, wht:N or haar:N");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Interpretability toolkit for transform-based image coders", "codec-lens"};
  app.require_subcommand(1);
  Options o;
  std::function<int(const Options&, std::ostream&, std::ostream&)> handler;

  auto* basis = app.add_subcommand("basis", "Extract decoder basis functions via channel impulses");
  AddDecoderFlags(basis, o);
  basis->add_option("--images", o.images, "Glob or directory of images for amplitudes and ranks");
  basis->add_option("--out", o.out, "Output directory");
  basis->add_option("--amplitudes", o.amplitudes, "kodak-max, unit or abs-max")
      ->check(CLI::IsMember({"kodak-max", "unit", "abs-max"}));
  basis->add_flag("--offset-free", o.offset_free, "Subtract the decoder's zero response");
  basis->add_option("--scale-mode", o.scale_mode, "min-max, symmetric-zero or global");
  basis->add_option("--columns", o.columns, "Grid columns")->check(CLI::PositiveNumber);
  basis->add_option("--top", o.top, "Render only the first K tiles");
  basis->add_option("--tile-size", o.tile_size, "Tile size in pixels");
  basis->callback([&] { handler = CmdBasis; });

  auto* decompose = app.add_subcommand("decompose", "Spatial and channel-wise decomposition mosaics");
  AddDecoderFlags(decompose, o);
  decompose->add_option("--image", o.image, "Input image");
  decompose->add_option("--images", o.images, "Glob; the first match is used");
  decompose->add_option("--out", o.out, "Output directory");
  decompose->add_flag("--quantize", o.quantize, "Round latents before decoding");
  decompose->add_option("--scale-mode", o.scale_mode, "min-max, symmetric-zero or global");
  decompose->add_option("--columns", o.columns, "Channel mosaic columns")->check(CLI::PositiveNumber);
  decompose->add_option("--tile-size", o.tile_size, "Tile size in pixels");
  decompose->callback([&] { handler = CmdDecompose; });

  auto* sep = app.add_subcommand("separability", "Spatial and channel-wise separability metrics");
  AddDecoderFlags(sep, o);
  sep->add_option("--images", o.images, "Glob or directory of images");
  sep->add_option("--out", o.out, "Directory for separability.json");
  sep->add_flag("--quantize", o.quantize, "Round latents before decoding");
  sep->add_option("--spatial-subset", o.spatial_subset,
                  "Images used for the spatial metric (0 = all)");
  sep->callback([&] { handler = CmdSeparability; });

  auto* rates = app.add_subcommand("rates", "Empirical per-channel rates");
  rates->add_option("--analysis-weights", o.analysis_weights, "Analysis weights (LICW)");
  rates->add_option("--decoder", o.decoder, "Built-in linear coder: dct:N, wht:N or haar:N");
  rates->add_option("--images", o.images, "Glob or directory of images");
  rates->add_option("--out", o.out, "Directory for rates.json");
  rates->callback([&] { handler = CmdRates; });

  auto* compare = app.add_subcommand("compare", "Match a basis against a reference basis");
  compare->add_option("--basis", o.basis, "Basis directory written by `basis`");
  compare->add_option("--reference", o.reference, "dct, wht, haar, klt:<images> or a basis directory");
  compare->add_option("--out", o.out, "Directory for compare.json");
  compare->callback([&] { handler = CmdCompare; });

  auto* self = app.add_subcommand("selftest", "Run the built-in property checks");
  self->add_option("--seed", o.seed, "Random seed");
  self->add_flag("--corrupt-weights", o.corrupt_weights, "Inject a corrupted weight file");
  self->callback([&] { handler = CmdSelfTest; });

  auto* toy = app.add_subcommand("make-toy", "Write a random-weight toy coder");
  toy->add_option("--out", o.out, "Output directory");
  toy->add_option("--seed", o.seed, "Random seed");
  toy->add_option("--latent-channels", o.latent_channels)->check(CLI::PositiveNumber);
  toy->add_option("--image-channels", o.image_channels);
  toy->add_flag("--linear", o.linear, "Identity normalization and zero biases");
  toy->callback([&] { handler = CmdMakeToy; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitUsage;
  }
  try {
    return handler(o, out, err);
  } catch (const CommandError& e) {
    err << "codec-lens: " << e.what() << "\n";
    return e.code();
  } catch (const std::exception& e) {
    err << "codec-lens: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace codec_lens::cli
