#include "seedseg/formats.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <iterator>
#include <sstream>

#include "seedseg/error.hpp"

namespace seedseg {

namespace {

constexpr std::string_view kSmapMagic = "SEEDSEG-LABELS 1";

// Cursor over a text header (PNM-style: whitespace separated, '#' comments).
class Tokenizer {
 public:
  explicit Tokenizer(std::string_view text) : text_(text) {}

  std::string_view next(bool comments = true) {
    skip_space(comments);
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  std::string_view line() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
    std::string_view out = text_.substr(start, pos_ - start);
    if (pos_ < text_.size()) ++pos_;
    if (!out.empty() && out.back() == '\r') out.remove_suffix(1);
    return out;
  }

  std::size_t pos() const { return pos_; }
  void advance(std::size_t n) { pos_ += n; }

 private:
  void skip_space(bool comments) {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (comments && c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

template <typename T>
T parse_int(std::string_view token, ErrorCode missing, const char* what) {
  if (token.empty()) throw Error(missing, std::string("missing ") + what);
  T value{};
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw Error(ErrorCode::NonNumeric, std::string("non-numeric ") + what + " '" +
                                           std::string(token) + "'");
  }
  return value;
}

void check_positive(long long w, long long h) {
  if (w < 1 || h < 1) {
    throw Error(ErrorCode::BadDimensions, "non-positive dimensions " + std::to_string(w) +
                                              "x" + std::to_string(h));
  }
}

}  // namespace

Image load_ppm(std::string_view bytes) {
  Tokenizer tok(bytes);
  if (tok.next(false) != "P6") throw Error(ErrorCode::BadMagic, "not a binary PPM (P6)");
  const auto w = parse_int<long long>(tok.next(), ErrorCode::Truncated, "width");
  const auto h = parse_int<long long>(tok.next(), ErrorCode::Truncated, "height");
  check_positive(w, h);
  const auto maxval = parse_int<long long>(tok.next(), ErrorCode::Truncated, "maxval");
  if (maxval != 255) {
    throw Error(ErrorCode::BadMaxval, "maxval must be 255, got " + std::to_string(maxval));
  }
  // Exactly one whitespace byte separates the header from the raster.
  if (tok.pos() >= bytes.size()) throw Error(ErrorCode::Truncated, "missing pixel data");
  tok.advance(1);

  const std::size_t count = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  const std::size_t start = tok.pos();
  if (bytes.size() - start < 3 * count) {
    throw Error(ErrorCode::Truncated, "pixel data truncated: expected " +
                                          std::to_string(3 * count) + " bytes, have " +
                                          std::to_string(bytes.size() - start));
  }
  std::vector<Rgb> pixels(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data() + start + 3 * i);
    pixels[i] = {p[0], p[1], p[2]};
  }
  return Image(static_cast<int>(w), static_cast<int>(h), std::move(pixels));
}

std::string save_ppm(const Image& img) {
  std::string out = "P6\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) +
                    "\n255\n";
  out.reserve(out.size() + 3 * img.size());
  for (const Rgb& p : img.pixels()) {
    out.push_back(static_cast<char>(p.r));
    out.push_back(static_cast<char>(p.g));
    out.push_back(static_cast<char>(p.b));
  }
  return out;
}

std::string save_smap(const LabelMap& labels) {
  std::string out;
  out.reserve(labels.size() * 4 + 64);
  out += kSmapMagic;
  out += '\n';
  out += std::to_string(labels.width()) + " " + std::to_string(labels.height()) + " " +
         std::to_string(labels.max_label()) + "\n";
  for (int y = 0; y < labels.height(); ++y) {
    for (int x = 0; x < labels.width(); ++x) {
      if (x > 0) out += ' ';
      out += std::to_string(labels.at({x, y}));
    }
    out += '\n';
  }
  return out;
}

LabelMap load_smap(std::string_view text) {
  Tokenizer tok(text);
  const std::string_view magic = tok.line();
  if (magic != kSmapMagic) {
    throw Error(magic.starts_with("SEEDSEG-LABELS") ? ErrorCode::BadVersion
                                                    : ErrorCode::BadMagic,
                "unsupported label map header '" + std::string(magic) + "'");
  }
  const auto w = parse_int<long long>(tok.next(false), ErrorCode::Truncated, "width");
  const auto h = parse_int<long long>(tok.next(false), ErrorCode::Truncated, "height");
  check_positive(w, h);
  const auto k = parse_int<Label>(tok.next(false), ErrorCode::Truncated, "max label");

  LabelMap labels(static_cast<int>(w), static_cast<int>(h));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto l = parse_int<Label>(tok.next(false), ErrorCode::Truncated, "label");
    if (l > k) {
      throw Error(ErrorCode::DimensionMismatch,
                  "label " + std::to_string(l) + " exceeds declared maximum " + std::to_string(k));
    }
    labels.set(i, l);
  }
  if (!tok.next(false).empty()) {
    throw Error(ErrorCode::DimensionMismatch, "trailing data after label rows");
  }
  labels.reserve_labels(k);
  return labels;
}

std::string save_pbm(int width, int height, const std::vector<PixelCoord>& mask) {
  check_positive(width, height);
  const std::size_t w = static_cast<std::size_t>(width);
  std::vector<char> bits(w * static_cast<std::size_t>(height), 0);
  for (const PixelCoord& p : mask) {
    if (p.x < 0 || p.y < 0 || p.x >= width || p.y >= height) {
      throw Error(ErrorCode::OutOfBounds, "mask pixel outside the image");
    }
    bits[static_cast<std::size_t>(p.y) * w + static_cast<std::size_t>(p.x)] = 1;
  }
  std::string out = "P1\n" + std::to_string(width) + " " + std::to_string(height) + "\n";
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if (x > 0) out += ' ';
      out += bits[static_cast<std::size_t>(y) * w + static_cast<std::size_t>(x)] ? '1' : '0';
    }
    out += '\n';
  }
  return out;
}

std::vector<PixelCoord> load_pbm(std::string_view text, int* width, int* height) {
  Tokenizer tok(text);
  if (tok.next(false) != "P1") throw Error(ErrorCode::BadMagic, "not a plain PBM (P1)");
  const auto w = parse_int<long long>(tok.next(), ErrorCode::Truncated, "width");
  const auto h = parse_int<long long>(tok.next(), ErrorCode::Truncated, "height");
  check_positive(w, h);

  std::vector<PixelCoord> mask;
  long long read = 0;
  const long long total = w * h;
  while (read < total) {
    const std::string_view t = tok.next();
    if (t.empty()) throw Error(ErrorCode::Truncated, "PBM raster truncated");
    // P1 permits digits without separators.
    for (char c : t) {
      if (c != '0' && c != '1') throw Error(ErrorCode::NonNumeric, "PBM raster must be 0/1");
      if (read >= total) throw Error(ErrorCode::DimensionMismatch, "PBM raster too long");
      if (c == '1') mask.push_back({static_cast<int>(read % w), static_cast<int>(read / w)});
      ++read;
    }
  }
  if (width) *width = static_cast<int>(w);
  if (height) *height = static_cast<int>(h);
  return mask;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace seedseg
