#include "relkit/core.hpp"

#include <algorithm>

namespace relkit {

namespace {
const char* kReserved[] = {"\xe2\x8a\xa5", "\xe2\x8a\xa3", "\xe2\x8a\xa2",
                           "#", "$", "\xe2\x8b\x84", "_", "END"};
}  // namespace

bool Alphabet::is_reserved(const std::string& name) {
  for (const char* r : kReserved)
    if (name == r) return true;
  return false;
}

bool Alphabet::is_valid_letter_name(const std::string& name) {
  if (name.empty() || is_reserved(name)) return false;
  for (char c : name) {
    if (c == '(' || c == ')' || c == ',' || c == '#' || c == '.' ||
        std::isspace(static_cast<unsigned char>(c)))
      return false;
  }
  return true;
}

Alphabet::Alphabet(std::vector<std::string> letters) : letters_(std::move(letters)) {
  for (size_t i = 0; i < letters_.size(); ++i) {
    if (!index_.emplace(letters_[i], static_cast<Sym>(i)).second)
      throw InputError("duplicate alphabet letter: " + letters_[i]);
  }
}

std::optional<Sym> Alphabet::find(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Sym Alphabet::at(const std::string& name) const {
  auto s = find(name);
  if (!s) throw InputError("unknown letter: " + name);
  return *s;
}

Sym Alphabet::add(const std::string& name) {
  if (index_.count(name)) throw InputError("duplicate alphabet letter: " + name);
  if (!is_valid_letter_name(name)) throw InputError("invalid alphabet letter: " + name);
  letters_.push_back(name);
  Sym s = static_cast<Sym>(letters_.size() - 1);
  index_.emplace(name, s);
  return s;
}

std::string Alphabet::fresh_name(const std::string& base) const {
  if (!index_.count(base) && is_valid_letter_name(base)) return base;
  for (int i = 1;; ++i) {
    std::string cand = base + std::to_string(i);
    if (!index_.count(cand)) return cand;
  }
}

long long tuple_len(const WordTuple& u) {
  long long n = 0;
  for (const Word& w : u) n += static_cast<long long>(w.size());
  return n;
}

ConvWord convolve(const WordTuple& u) {
  size_t maxlen = 0;
  for (const Word& w : u) maxlen = std::max(maxlen, w.size());
  ConvWord out(maxlen, TupleLetter(u.size(), kPad));
  for (size_t i = 0; i < u.size(); ++i)
    for (size_t p = 0; p < u[i].size(); ++p) out[p][i] = u[i][p];
  return out;
}

bool convolution_valid(const ConvWord& w, int k) {
  for (const TupleLetter& l : w)
    if (static_cast<int>(l.size()) != k) return false;
  for (int i = 0; i < k; ++i) {
    bool padded = false;
    for (const TupleLetter& l : w) {
      if (l[static_cast<size_t>(i)] == kPad)
        padded = true;
      else if (padded)
        return false;  // letter after padding
    }
  }
  if (!w.empty()) {
    bool all_pad = true;
    for (Sym s : w.back())
      if (s != kPad) all_pad = false;
    if (all_pad) return false;
  }
  return true;
}

WordTuple deconvolve(const ConvWord& w, int k) {
  if (!convolution_valid(w, k)) throw InputError("malformed convolution word");
  WordTuple u(static_cast<size_t>(k));
  for (const TupleLetter& l : w)
    for (int i = 0; i < k; ++i)
      if (l[static_cast<size_t>(i)] != kPad) u[static_cast<size_t>(i)].push_back(l[static_cast<size_t>(i)]);
  return u;
}

WordTuple odot(const std::vector<int>& I, int k, const WordTuple& u, const WordTuple& v) {
  if (u.size() != I.size() || u.size() + v.size() != static_cast<size_t>(k))
    throw InputError("odot: size mismatch");
  WordTuple out(static_cast<size_t>(k));
  std::vector<bool> in_I(static_cast<size_t>(k), false);
  for (size_t a = 0; a < I.size(); ++a) {
    in_I.at(static_cast<size_t>(I[a])) = true;
    out.at(static_cast<size_t>(I[a])) = u[a];
  }
  size_t b = 0;
  for (int i = 0; i < k; ++i)
    if (!in_I[static_cast<size_t>(i)]) out[static_cast<size_t>(i)] = v.at(b++);
  return out;
}

WordTuple project(const std::vector<int>& I, const WordTuple& u) {
  WordTuple out;
  out.reserve(I.size());
  for (int i : I) out.push_back(u.at(static_cast<size_t>(i)));
  return out;
}

WordTuple coproject(const std::vector<int>& I, int k, const WordTuple& u) {
  std::vector<bool> in_I(static_cast<size_t>(k), false);
  for (int i : I) in_I.at(static_cast<size_t>(i)) = true;
  WordTuple out;
  for (int i = 0; i < k; ++i)
    if (!in_I[static_cast<size_t>(i)]) out.push_back(u.at(static_cast<size_t>(i)));
  return out;
}

std::string word_to_string(const Alphabet& sigma, const Word& w, bool dot_separated) {
  std::string out;
  for (size_t i = 0; i < w.size(); ++i) {
    if (dot_separated && i > 0) out += '.';
    out += w[i] == kEnd ? "END" : sigma.name(w[i]);
  }
  return out;
}

std::string tuple_to_string(const Alphabet& sigma, const WordTuple& u) {
  bool dots = false;
  for (const std::string& l : sigma.letters())
    if (l.size() > 1) dots = true;
  std::string out = "(";
  for (size_t i = 0; i < u.size(); ++i) {
    if (i > 0) out += ',';
    out += word_to_string(sigma, u[i], dots);
  }
  return out + ")";
}

}  // namespace relkit
