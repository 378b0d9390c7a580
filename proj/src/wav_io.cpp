#include "rirtrack/wav_io.hpp"

#include "rirtrack/types.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace rirtrack {

namespace {

static_assert(std::endian::native == std::endian::little,
              "WAV I/O assumes a little-endian host");

template <typename T>
T read_le(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw DataError("unexpected end of WAV file");
  return value;
}

template <typename T>
void write_le(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

std::string read_tag(std::istream& in) {
  char tag[4];
  in.read(tag, 4);
  if (!in) throw DataError("unexpected end of WAV file");
  return std::string(tag, 4);
}

double decode_sample(const uint8_t* bytes, uint16_t format, uint16_t bits) {
  if (format == 3) {  // IEEE float
    if (bits == 32) {
      float v;
      std::memcpy(&v, bytes, 4);
      return v;
    }
    double v;
    std::memcpy(&v, bytes, 8);
    return v;
  }
  // PCM, two's complement, scaled to [-1, 1)
  if (bits == 16) {
    int16_t v;
    std::memcpy(&v, bytes, 2);
    return v / 32768.0;
  }
  if (bits == 24) {
    const uint32_t u = (static_cast<uint32_t>(bytes[0]) << 8) |
                       (static_cast<uint32_t>(bytes[1]) << 16) |
                       (static_cast<uint32_t>(bytes[2]) << 24);
    return (std::bit_cast<int32_t>(u) >> 8) / 8388608.0;
  }
  int32_t v;
  std::memcpy(&v, bytes, 4);
  return v / 2147483648.0;
}

}  // namespace

WavData read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open WAV file: " + path.string());

  if (read_tag(in) != "RIFF") throw DataError("not a RIFF file: " + path.string());
  read_le<uint32_t>(in);  // riff size, unused
  if (read_tag(in) != "WAVE") throw DataError("not a WAVE file: " + path.string());

  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t sample_rate = 0;
  bool have_fmt = false;
  WavData out;

  while (in.peek() != EOF) {
    const std::string tag = read_tag(in);
    const uint32_t size = read_le<uint32_t>(in);
    if (tag == "fmt ") {
      format = read_le<uint16_t>(in);
      channels = read_le<uint16_t>(in);
      sample_rate = read_le<uint32_t>(in);
      read_le<uint32_t>(in);  // byte rate
      read_le<uint16_t>(in);  // block align
      bits = read_le<uint16_t>(in);
      if (size > 16) {
        std::vector<char> extra(size - 16);
        in.read(extra.data(), extra.size());
        if (format == 0xFFFE && size >= 40) {
          // WAVE_FORMAT_EXTENSIBLE: the actual format is the first two
          // bytes of the subformat GUID (offset 8 within the extension,
          // which starts with cbSize at extra[0]).
          uint16_t sub;
          std::memcpy(&sub, extra.data() + 8, 2);
          format = sub;
        }
      }
      have_fmt = true;
    } else if (tag == "data") {
      if (!have_fmt) throw DataError("WAV data chunk before fmt chunk");
      if (format != 1 && format != 3)
        throw DataError("unsupported WAV format code " + std::to_string(format));
      if ((format == 1 && bits != 16 && bits != 24 && bits != 32) ||
          (format == 3 && bits != 32 && bits != 64))
        throw DataError("unsupported WAV bit depth " + std::to_string(bits));
      if (channels < 1) throw DataError("WAV file has no channels");

      const size_t bytes_per_sample = bits / 8;
      const size_t frame_bytes = bytes_per_sample * channels;
      const size_t frames = size / frame_bytes;
      std::vector<uint8_t> raw(size);
      in.read(reinterpret_cast<char*>(raw.data()), size);
      if (!in) throw DataError("truncated WAV data chunk");

      out.samples.resize(frames);
      for (size_t f = 0; f < frames; ++f)
        out.samples[f] = decode_sample(raw.data() + f * frame_bytes, format, bits);
      out.sample_rate = sample_rate;
      out.channels = channels;
      if (size % 2 == 1) in.ignore(1);
      return out;
    } else {
      in.ignore(size + (size % 2));
    }
  }
  throw DataError("WAV file has no data chunk: " + path.string());
}

void write_wav(const std::filesystem::path& path, const std::vector<double>& samples,
               double sample_rate) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot create WAV file: " + path.string());

  const uint32_t rate = static_cast<uint32_t>(sample_rate);
  const uint32_t data_bytes = static_cast<uint32_t>(samples.size() * 8);

  out.write("RIFF", 4);
  write_le<uint32_t>(out, 4 + 24 + 8 + data_bytes);
  out.write("WAVE", 4);

  out.write("fmt ", 4);
  write_le<uint32_t>(out, 16);
  write_le<uint16_t>(out, 3);  // IEEE float
  write_le<uint16_t>(out, 1);  // mono
  write_le<uint32_t>(out, rate);
  write_le<uint32_t>(out, rate * 8);
  write_le<uint16_t>(out, 8);
  write_le<uint16_t>(out, 64);

  out.write("data", 4);
  write_le<uint32_t>(out, data_bytes);
  out.write(reinterpret_cast<const char*>(samples.data()), data_bytes);
  if (!out) throw DataError("failed writing WAV file: " + path.string());
}

}  // namespace rirtrack
