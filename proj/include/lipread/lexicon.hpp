#pragma once

// Korean viseme inventory, Hangul-to-viseme conversion and triviseme
// expansion.

#include <array>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lipread/error.hpp"

namespace lipread {

enum class Viseme : std::uint8_t { a, o, u, i, e, we, wi, wa, wo, m, sil };

inline constexpr std::size_t kVisemeCount = 11;

inline constexpr std::array<Viseme, 10> kSpokenVisemes = {
    Viseme::a, Viseme::o, Viseme::u, Viseme::i, Viseme::e,
    Viseme::we, Viseme::wi, Viseme::wa, Viseme::wo, Viseme::m};

inline std::string_view to_string(Viseme v) {
  static constexpr std::array<std::string_view, kVisemeCount> names = {
      "a", "o", "u", "i", "e", "we", "wi", "wa", "wo", "m", "sil"};
  return names[static_cast<std::size_t>(v)];
}

inline std::optional<Viseme> try_parse_viseme(std::string_view s) {
  for (std::size_t k = 0; k < kVisemeCount; ++k) {
    auto v = static_cast<Viseme>(k);
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

inline Viseme parse_viseme(std::string_view s) {
  if (auto v = try_parse_viseme(s)) return *v;
  throw ValidationError("unknown viseme symbol '" + std::string(s) + "'");
}

// Single visemes are defined by one basic lip shape.
inline bool is_single(Viseme v) {
  switch (v) {
    case Viseme::a: case Viseme::o: case Viseme::u:
    case Viseme::i: case Viseme::e: case Viseme::m:
      return true;
    default:
      return false;
  }
}

// Double visemes are a transition between two basic lip shapes.
inline bool is_double(Viseme v) {
  return v == Viseme::we || v == Viseme::wi || v == Viseme::wa || v == Viseme::wo;
}

using VisemeSeq = std::vector<Viseme>;

inline std::string join(const VisemeSeq& vs, std::string_view sep = " ") {
  std::string out;
  for (std::size_t t = 0; t < vs.size(); ++t) {
    if (t) out += sep;
    out += to_string(vs[t]);
  }
  return out;
}

// Whitespace-separated symbols.
inline VisemeSeq parse_viseme_list(std::string_view text) {
  VisemeSeq out;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) out.push_back(parse_viseme(tok));
  return out;
}

struct Triviseme {
  Viseme left = Viseme::sil;
  Viseme center = Viseme::a;
  Viseme right = Viseme::sil;

  friend auto operator<=>(const Triviseme&, const Triviseme&) = default;
};

// HTK-style name, e.g. "sil-m+o".
inline std::string to_string(const Triviseme& t) {
  return std::string(to_string(t.left)) + "-" + std::string(to_string(t.center)) + "+" +
         std::string(to_string(t.right));
}

inline Triviseme parse_triviseme(std::string_view s) {
  auto dash = s.find('-');
  auto plus = s.find('+', dash == std::string_view::npos ? 0 : dash);
  if (dash == std::string_view::npos || plus == std::string_view::npos)
    throw ValidationError("malformed triviseme '" + std::string(s) + "'");
  Triviseme t{parse_viseme(s.substr(0, dash)), parse_viseme(s.substr(dash + 1, plus - dash - 1)),
              parse_viseme(s.substr(plus + 1))};
  if (t.center == Viseme::sil) throw ValidationError("triviseme center cannot be sil");
  return t;
}

inline std::vector<Triviseme> expand_trivisemes(const VisemeSeq& vs) {
  if (vs.empty()) throw ValidationError("cannot expand an empty viseme sequence");
  std::vector<Triviseme> out;
  out.reserve(vs.size());
  for (std::size_t t = 0; t < vs.size(); ++t) {
    if (vs[t] == Viseme::sil) throw ValidationError("sil cannot be a triviseme center");
    out.push_back({t > 0 ? vs[t - 1] : Viseme::sil, vs[t],
                   t + 1 < vs.size() ? vs[t + 1] : Viseme::sil});
  }
  return out;
}

// ---------------------------------------------------------------------------
// UTF-8

inline std::vector<char32_t> decode_utf8(std::string_view s) {
  std::vector<char32_t> out;
  std::size_t i = 0;
  auto fail = [&] { throw ValidationError("invalid UTF-8 at byte " + std::to_string(i)); };
  while (i < s.size()) {
    auto b0 = static_cast<unsigned char>(s[i]);
    int len = b0 < 0x80 ? 1 : (b0 >> 5) == 0x6 ? 2 : (b0 >> 4) == 0xE ? 3 : (b0 >> 3) == 0x1E ? 4 : 0;
    if (len == 0 || i + len > s.size()) fail();
    char32_t cp = len == 1 ? b0 : len == 2 ? (b0 & 0x1F) : len == 3 ? (b0 & 0x0F) : (b0 & 0x07);
    for (int k = 1; k < len; ++k) {
      auto b = static_cast<unsigned char>(s[i + k]);
      if ((b >> 6) != 0x2) fail();
      cp = (cp << 6) | (b & 0x3F);
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

inline std::string encode_utf8(char32_t cp) {
  std::string out;
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Hangul

namespace hangul {

inline constexpr char32_t kSyllableFirst = 0xAC00;
inline constexpr char32_t kSyllableLast = 0xD7A3;
inline constexpr int kVowelCount = 21;
inline constexpr int kCodaCount = 28;
inline constexpr int kOnsetStride = kVowelCount * kCodaCount;  // 588

// Romanized medial vowels in jamo order.
inline constexpr std::array<std::string_view, kVowelCount> kVowelNames = {
    "a", "ae", "ya", "yae", "eo", "e", "yeo", "ye", "o", "wa", "wae",
    "oe", "yo", "u", "wo", "we", "wi", "yu", "eu", "ui", "i"};

// Onsets articulated with closed lips: ㅁ ㅂ ㅃ ㅍ.
inline bool is_labial_onset(int onset) { return onset == 6 || onset == 7 || onset == 8 || onset == 17; }

// Codas ㅁ ㅂ ㅍ.
inline bool is_labial_coda(int coda) { return coda == 16 || coda == 17 || coda == 26; }

struct Syllable {
  int onset;
  int vowel;
  int coda;
};

inline Syllable decompose(char32_t cp) {
  if (cp < kSyllableFirst || cp > kSyllableLast)
    throw ValidationError("not a precomposed Hangul syllable: U+" + [&] {
      std::ostringstream o;
      o << std::hex << std::uppercase << static_cast<std::uint32_t>(cp);
      return o.str();
    }());
  int idx = static_cast<int>(cp - kSyllableFirst);
  return {idx / kOnsetStride, (idx % kOnsetStride) / kCodaCount, idx % kCodaCount};
}

// Compatibility jamo (U+314F..U+3163) for a medial vowel index.
inline std::string vowel_jamo(int vowel) { return encode_utf8(0x314F + static_cast<char32_t>(vowel)); }

// Accepts a compatibility (U+314F..) or conjoining (U+1161..) vowel jamo.
inline std::optional<int> vowel_index(std::string_view jamo) {
  auto cps = decode_utf8(jamo);
  if (cps.size() != 1) return std::nullopt;
  char32_t cp = cps[0];
  if (cp >= 0x314F && cp <= 0x3163) return static_cast<int>(cp - 0x314F);
  if (cp >= 0x1161 && cp <= 0x1175) return static_cast<int>(cp - 0x1161);
  return std::nullopt;
}

// The vowel table of the viseme definition; nullopt for vowels it omits.
inline std::optional<Viseme> table_vowel(int vowel) {
  switch (vowel) {
    case 0: case 2: return Viseme::a;     // ㅏ ㅑ
    case 8: case 12: return Viseme::o;    // ㅗ ㅛ
    case 13: case 17: return Viseme::u;   // ㅜ ㅠ
    case 20: return Viseme::i;            // ㅣ
    case 5: return Viseme::e;             // ㅔ
    case 15: return Viseme::we;           // ㅞ
    case 16: case 19: return Viseme::wi;  // ㅟ ㅢ
    case 9: return Viseme::wa;            // ㅘ
    case 14: return Viseme::wo;           // ㅝ
    default: return std::nullopt;
  }
}

}  // namespace hangul

// Vowel index -> viseme for vowels outside the base table.
using ExtensionMap = std::map<int, Viseme>;

// Nearest mouth shape for the vowels the base table leaves out.
inline ExtensionMap default_extension_map() {
  return {
      {1, Viseme::e},    // ㅐ ae
      {3, Viseme::e},    // ㅒ yae
      {7, Viseme::e},    // ㅖ ye
      {4, Viseme::o},    // ㅓ eo
      {6, Viseme::o},    // ㅕ yeo
      {18, Viseme::u},   // ㅡ eu
      {11, Viseme::we},  // ㅚ oe
      {10, Viseme::we},  // ㅙ wae
  };
}

struct HangulOptions {
  // Emit m for syllable-final ㅁ/ㅂ/ㅍ.
  bool labial_codas = false;
};

inline VisemeSeq hangul_to_visemes(std::string_view word, const ExtensionMap& ext,
                                   const HangulOptions& opts = {}) {
  VisemeSeq out;
  for (char32_t cp : decode_utf8(word)) {
    auto syl = hangul::decompose(cp);
    if (hangul::is_labial_onset(syl.onset)) out.push_back(Viseme::m);
    auto v = hangul::table_vowel(syl.vowel);
    if (!v) {
      auto it = ext.find(syl.vowel);
      if (it == ext.end())
        throw ValidationError("vowel " + hangul::vowel_jamo(syl.vowel) + " (" +
                              std::string(hangul::kVowelNames[syl.vowel]) +
                              ") has no viseme mapping");
      v = it->second;
    }
    out.push_back(*v);
    if (opts.labial_codas && hangul::is_labial_coda(syl.coda)) out.push_back(Viseme::m);
  }
  if (out.empty()) throw ValidationError("empty word");
  return out;
}

inline VisemeSeq hangul_to_visemes(std::string_view word) {
  return hangul_to_visemes(word, default_extension_map());
}

// TSV: vowel-jamo<TAB>viseme. Entries override the defaults they name.
inline ExtensionMap load_extension_map(const std::string& path, ExtensionMap base = {}) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open extension map '" + path + "'");
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError("expected vowel<TAB>viseme", lineno);
    auto idx = hangul::vowel_index(line.substr(0, tab));
    if (!idx) throw ParseError("not a vowel jamo: '" + line.substr(0, tab) + "'", lineno);
    auto v = try_parse_viseme(line.substr(tab + 1));
    if (!v || *v == Viseme::sil) throw ParseError("invalid viseme '" + line.substr(tab + 1) + "'", lineno);
    base[*idx] = *v;
  }
  return base;
}

// Word -> viseme sequence. std::map keeps iteration (and tie-breaking) lexicographic.
class VisemeLexicon {
 public:
  void add(std::string word, VisemeSeq seq) {
    if (seq.empty()) throw ValidationError("empty viseme sequence for '" + word + "'");
    for (auto v : seq)
      if (v == Viseme::sil) throw ValidationError("sil inside the entry for '" + word + "'");
    if (!entries_.emplace(word, std::move(seq)).second)
      throw ValidationError("duplicate word '" + word + "'");
  }

  const VisemeSeq& at(const std::string& word) const {
    auto it = entries_.find(word);
    if (it == entries_.end()) throw ValidationError("word not in lexicon: '" + word + "'");
    return it->second;
  }

  bool contains(const std::string& word) const { return entries_.count(word) > 0; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

 private:
  std::map<std::string, VisemeSeq> entries_;
};

inline VisemeLexicon parse_lexicon(std::istream& in, const ExtensionMap& ext,
                                   const HangulOptions& opts = {}) {
  VisemeLexicon lex;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) throw ParseError("expected word<TAB>visemes", lineno);
    std::string word = line.substr(0, tab);
    std::string rhs = line.substr(tab + 1);
    VisemeSeq seq;
    try {
      if (rhs == "@auto") {
        seq = hangul_to_visemes(word, ext, opts);
      } else {
        seq = parse_viseme_list(rhs);
      }
      lex.add(word, std::move(seq));
    } catch (const ParseError&) {
      throw;
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  return lex;
}

inline VisemeLexicon load_lexicon(const std::string& path, const ExtensionMap& ext = default_extension_map(),
                                  const HangulOptions& opts = {}) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open lexicon '" + path + "'");
  return parse_lexicon(in, ext, opts);
}

}  // namespace lipread
