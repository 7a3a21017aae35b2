#ifndef TLEM_GODEL_HPP
#define TLEM_GODEL_HPP

#include <array>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tlem/ast.hpp"
#include "tlem/nat.hpp"
#include "tlem/sexpr.hpp"

namespace tlem {

class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Goedel numbering of canonical s-expression text.
///
/// The canonical text is split into tokens: parentheses, a fixed table of
/// keywords, and escaped words (a kind marker followed by one token per
/// character). The token stream d_1 .. d_m, with each d_i in 1..k, is read as a
/// bijective base-k numeral  d_1 k^(m-1) + ... + d_m, so codes are injective,
/// decodable, and strictly increasing in stream length.
class TokenCodec {
 public:
  static const TokenCodec& instance()
  {
    static const TokenCodec codec;
    return codec;
  }

  std::size_t alphabet_size() const { return symbols_.size(); }

  std::vector<unsigned> tokenize(std::string_view text) const
  {
    std::vector<unsigned> out;
    std::size_t i = 0;
    while (i < text.size()) {
      char c = text[i];
      if (c == ' ') {
        ++i;
        continue;
      }
      if (c == '(' || c == ')') {
        out.push_back(c == '(' ? kOpen : kClose);
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < text.size() && text[j] != ' ' && text[j] != '(' && text[j] != ')') ++j;
      emit_word(text.substr(i, j - i), out);
      i = j;
    }
    return out;
  }

  std::string detokenize(const std::vector<unsigned>& toks) const
  {
    std::string out;
    bool need_space = false;
    std::size_t i = 0;
    while (i < toks.size()) {
      unsigned t = toks[i];
      if (t == kClose) {
        out.push_back(')');
        need_space = true;
        ++i;
        continue;
      }
      if (need_space) out.push_back(' ');
      if (t == kOpen) {
        out.push_back('(');
        need_space = false;
        ++i;
        continue;
      }
      if (t == kIdent || t == kParam || t == kNum) {
        std::string word = t == kParam ? "?" : "";
        std::size_t j = i + 1;
        while (j < toks.size() && is_char_token(toks[j])) {
          word.push_back(symbols_[toks[j] - 1][0]);
          ++j;
        }
        if (j == i + 1) throw DecodeError("empty escaped word in token stream");
        out += word;
        i = j;
      } else if (is_char_token(t)) {
        throw DecodeError("stray character token in token stream");
      } else {
        out += symbols_.at(t - 1);
        ++i;
      }
      need_space = true;
    }
    return out;
  }

  // Codes are bijective base-k numerals (digits 1..k). A stream of n tokens
  // codes to R(n) + (standard base-k value of the digits minus one), where
  // R(n) = 1 + k + ... + k^(n-1). Both directions split the digit string in
  // halves so that long proofs stay fast.
  Nat pack(const std::vector<unsigned>& toks) const
  {
    Powers pw(symbols_.size());
    std::vector<unsigned> digits(toks.size());
    for (std::size_t i = 0; i < toks.size(); ++i) digits[i] = toks[i] - 1;
    Nat code = pack_range(digits, 0, digits.size(), pw);
    return code + repunit(toks.size(), pw);
  }

  std::vector<unsigned> unpack(const Nat& code) const
  {
    Powers pw(symbols_.size());
    const double bits_per_digit = std::log2(static_cast<double>(symbols_.size()));
    std::size_t n = static_cast<std::size_t>(static_cast<double>(mpz_sizeinbase(code.get_mpz_t(), 2)) / bits_per_digit);
    n = n > 2 ? n - 2 : 0;
    while (repunit(n + 1, pw) <= code) ++n;
    while (n > 0 && repunit(n, pw) > code) --n;
    std::vector<unsigned> out(n);
    unpack_range(code - repunit(n, pw), out, 0, n, pw);
    for (unsigned& d : out) ++d;
    return out;
  }

  Nat encode_text(std::string_view canonical) const { return pack(tokenize(canonical)); }
  /// Only streams that tokenize() could have produced are accepted, so an
  /// escaped word spelling a keyword does not give a second code for it.
  std::string decode_text(const Nat& code) const
  {
    std::vector<unsigned> toks = unpack(code);
    std::string text = detokenize(toks);
    std::vector<unsigned> again;
    try {
      again = tokenize(text);
    } catch (const std::invalid_argument&) {
      throw DecodeError("token stream does not re-tokenize");
    }
    if (again != toks) throw DecodeError("token stream is not canonical");
    return text;
  }

 private:
  struct Powers {
    explicit Powers(unsigned long base) : k(base) {}
    const Nat& operator()(std::size_t e)
    {
      auto it = cache.find(e);
      if (it != cache.end()) return it->second;
      Nat v;
      mpz_ui_pow_ui(v.get_mpz_t(), k, e);
      return cache.emplace(e, std::move(v)).first->second;
    }
    unsigned long k;
    std::map<std::size_t, Nat> cache;
  };

  static Nat repunit(std::size_t n, Powers& pw)
  {
    Nat r = pw(n) - 1;
    mpz_divexact_ui(r.get_mpz_t(), r.get_mpz_t(), pw.k - 1);
    return r;
  }

  static Nat pack_range(const std::vector<unsigned>& d, std::size_t lo, std::size_t hi, Powers& pw)
  {
    if (hi - lo <= 32) {
      Nat v = 0;
      for (std::size_t i = lo; i < hi; ++i) {
        v *= pw.k;
        v += d[i];
      }
      return v;
    }
    std::size_t mid = lo + (hi - lo) / 2;
    return pack_range(d, lo, mid, pw) * pw(hi - mid) + pack_range(d, mid, hi, pw);
  }

  static void unpack_range(const Nat& v, std::vector<unsigned>& out, std::size_t lo, std::size_t hi, Powers& pw)
  {
    if (hi - lo <= 32) {
      Nat c = v;
      for (std::size_t i = hi; i-- > lo;) {
        out[i] = static_cast<unsigned>(mpz_fdiv_q_ui(c.get_mpz_t(), c.get_mpz_t(), pw.k));
      }
      return;
    }
    std::size_t mid = lo + (hi - lo) / 2;
    Nat q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), v.get_mpz_t(), pw(hi - mid).get_mpz_t());
    unpack_range(q, out, lo, mid, pw);
    unpack_range(r, out, mid, hi, pw);
  }

  static constexpr unsigned kOpen = 1;
  static constexpr unsigned kClose = 2;
  static constexpr unsigned kIdent = 3;
  static constexpr unsigned kParam = 4;
  static constexpr unsigned kNum = 5;

  TokenCodec()
  {
    symbols_ = {"(", ")", "<ident>", "<param>", "<num>"};
    static constexpr std::string_view kKeywords[] = {
        "=",     "leq",     "oracle",  "call",      "0",         "1",         "add",
        "double", "sub",    "div",     "max",       "logsp",     "root",      "count",
        "not",   "and",     "or",      "implies",   "forall",    "exists",    "bforall",
        "bexists", "tabproof", "tab1chain", "hilbproof", "lemma", "n",        "close",
        "goal",  "axiom",   "lem",     "r1",        "r2",        "r3",        "r4",
        "r5",    "r6",      "ra",      "rb"};
    for (auto kw : kKeywords) {
      keyword_.emplace(std::string(kw), static_cast<unsigned>(symbols_.size() + 1));
      symbols_.emplace_back(kw);
    }
    first_char_ = static_cast<unsigned>(symbols_.size() + 1);
    const std::string chars =
        "0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_";
    for (char c : chars) {
      char_token_[static_cast<unsigned char>(c)] = static_cast<unsigned>(symbols_.size() + 1);
      symbols_.emplace_back(1, c);
    }
  }

  bool is_char_token(unsigned t) const { return t >= first_char_; }

  void emit_word(std::string_view w, std::vector<unsigned>& out) const
  {
    auto it = keyword_.find(std::string(w));
    if (it != keyword_.end()) {
      out.push_back(it->second);
      return;
    }
    std::string_view body = w;
    if (!w.empty() && w[0] == '?') {
      out.push_back(kParam);
      body = w.substr(1);
    } else if (!w.empty() && w.find_first_not_of("0123456789") == std::string_view::npos) {
      out.push_back(kNum);
    } else {
      out.push_back(kIdent);
    }
    if (body.empty()) throw std::invalid_argument("cannot encode empty word");
    for (char c : body) {
      unsigned t = char_token_[static_cast<unsigned char>(c)];
      if (t == 0) throw std::invalid_argument(std::string("cannot encode character '") + c + "'");
      out.push_back(t);
    }
  }

  std::vector<std::string> symbols_;
  std::unordered_map<std::string, unsigned> keyword_;
  std::array<unsigned, 256> char_token_{};
  unsigned first_char_ = 0;
};

inline Nat encode(const Term& t) { return TokenCodec::instance().encode_text(to_string(t)); }
inline Nat encode(const Formula& f) { return TokenCodec::instance().encode_text(to_string(f)); }

/// Decodes a term or formula code. Throws DecodeError on codes outside the image.
inline Parsed decode(const Nat& code)
{
  std::string text;
  try {
    text = TokenCodec::instance().decode_text(code);
  } catch (const std::out_of_range&) {
    throw DecodeError("malformed code");
  }
  Parsed p = [&]() -> Parsed {
    try {
      return parse(text);
    } catch (const std::exception& e) {
      throw DecodeError("code does not denote a term or formula: " + std::string(e.what()));
    }
  }();
  std::string canonical = std::visit([](const auto& x) { return to_string(x); }, p);
  if (canonical != text) throw DecodeError("code is not in canonical form");
  return p;
}

inline Formula decode_formula(const Nat& code)
{
  Parsed p = decode(code);
  if (!std::holds_alternative<Formula>(p)) throw DecodeError("code denotes a term, not a formula");
  return std::get<Formula>(p);
}

}  // namespace tlem

#endif  // TLEM_GODEL_HPP
