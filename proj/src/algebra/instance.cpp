#include "treeqm/instance.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "treeqm/error.hpp"

namespace treeqm {

  namespace {

    std::uint64_t fnv1a(std::string_view text) {
      std::uint64_t h = 0xcbf29ce484222325ULL;
      for (char ch : text) {
        h ^= static_cast<unsigned char>(ch);
        h *= 0x100000001b3ULL;
      }
      return h;
    }

    void describe_group(std::ostringstream& out, FiniteGroup const& g) {
      out << '[';
      for (std::size_t i = 0; i < g.order(); ++i) {
        out << (i ? "," : "") << g.name(static_cast<int>(i));
      }
      out << "|";
      for (std::size_t i = 0; i < g.order(); ++i) {
        for (std::size_t j = 0; j < g.order(); ++j) {
          out << g.mul(static_cast<int>(i), static_cast<int>(j)) << ' ';
        }
      }
      out << ']';
    }

  }  // namespace

  Instance Instance::amalgam(FiniteGroup a,
                             FiniteGroup b,
                             FiniteGroup c,
                             Embedding   embed_a,
                             Embedding   embed_b) {
    if (embed_a.map.size() != c.order() || embed_b.map.size() != c.order()) {
      throw Error(ErrorKind::InvalidEmbedding, "embedding does not cover C");
    }
    if (c.order() >= a.order() || c.order() >= b.order()) {
      throw Error(ErrorKind::ImproperAmalgam,
                  "C must be a proper subgroup of both A and B (|A|="
                      + std::to_string(a.order()) + ", |B|=" + std::to_string(b.order())
                      + ", |C|=" + std::to_string(c.order()) + ")");
    }
    Instance inst;
    inst._kind     = InstanceKind::amalgam;
    inst._groups   = {std::move(a), std::move(b), std::move(c)};
    inst._embed[0] = std::move(embed_a.map);
    inst._embed[1] = std::move(embed_b.map);
    inst.finish();
    return inst;
  }

  Instance Instance::free(int rank, std::vector<std::string> generator_names) {
    if (rank < 2) {
      throw Error(ErrorKind::DegenerateTree,
                  "free groups of rank < 2 act on a line or a point");
    }
    if (generator_names.empty()) {
      if (rank == 2) {
        generator_names = {"x", "y"};
      } else if (rank == 3) {
        generator_names = {"x", "y", "z"};
      } else {
        for (int i = 1; i <= rank; ++i) {
          generator_names.push_back("x" + std::to_string(i));
        }
      }
    }
    if (generator_names.size() != static_cast<std::size_t>(rank)) {
      throw Error(ErrorKind::ParseError, "generator name count does not match rank");
    }
    for (auto const& name : generator_names) {
      if (name.empty() || name == "e" || name.find_first_of(" *^:") != std::string::npos) {
        throw Error(ErrorKind::ParseError, "invalid generator name '" + name + "'");
      }
    }
    Instance inst;
    inst._kind            = InstanceKind::free;
    inst._rank            = rank;
    inst._generator_names = std::move(generator_names);
    inst.finish();
    return inst;
  }

  void Instance::finish() {
    std::ostringstream out;
    if (_kind == InstanceKind::free) {
      out << "free rank=" << _rank << " gens=";
      for (auto const& n : _generator_names) {
        out << n << ',';
      }
    } else {
      FiniteGroup const& c = _groups[kFactorC];
      for (int f : {kFactorA, kFactorB}) {
        FiniteGroup const& x = _groups[static_cast<std::size_t>(f)];
        _preimage[f].assign(x.order(), -1);
        for (std::size_t i = 0; i < c.order(); ++i) {
          _preimage[f][static_cast<std::size_t>(_embed[f][i])] = static_cast<int>(i);
        }
        // left cosets xC; representative = identity for C itself, otherwise
        // the first element of the coset in table order
        std::vector<int> coset_of(x.order(), -1);
        _reps[f].clear();
        auto add_coset = [&](int rep) {
          int const r = static_cast<int>(_reps[f].size());
          _reps[f].push_back(rep);
          for (std::size_t ci = 0; ci < c.order(); ++ci) {
            coset_of[static_cast<std::size_t>(x.mul(rep, _embed[f][ci]))] = r;
          }
        };
        add_coset(x.identity());
        for (std::size_t i = 0; i < x.order(); ++i) {
          if (coset_of[i] < 0) {
            add_coset(static_cast<int>(i));
          }
        }
        _split[f].resize(x.order());
        for (std::size_t i = 0; i < x.order(); ++i) {
          int const r   = coset_of[i];
          int const rep = _reps[f][static_cast<std::size_t>(r)];
          int const cx  = x.mul(x.inv(rep), static_cast<int>(i));
          _split[f][i]  = {r, _preimage[f][static_cast<std::size_t>(cx)]};
        }
      }
      out << "amalgam A=";
      describe_group(out, _groups[0]);
      out << " B=";
      describe_group(out, _groups[1]);
      out << " C=";
      describe_group(out, _groups[2]);
      for (int f : {kFactorA, kFactorB}) {
        out << " emb" << f << '=';
        for (int y : _embed[f]) {
          out << y << ',';
        }
      }
    }
    _description = out.str();
    _hash        = fnv1a(_description);
  }

  FiniteGroup const& Instance::group(int factor) const {
    if (!is_amalgam()) {
      throw Error(ErrorKind::PreconditionViolated, "free instances have no vertex groups");
    }
    return _groups.at(static_cast<std::size_t>(factor));
  }

  std::optional<int> Instance::preimage(int factor, int x) const {
    int const c = _preimage[factor][static_cast<std::size_t>(x)];
    if (c < 0) {
      return std::nullopt;
    }
    return c;
  }

  std::vector<int> Instance::subgroup_image(int factor) const {
    return _embed[factor];
  }

  std::string Instance::hash_hex() const {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(_hash));
    return buf;
  }

  Element Instance::identity() const {
    Element e;
    if (is_amalgam()) {
      e.c = _groups[kFactorC].identity();
    }
    return e;
  }

  void Instance::mul_letter(Element& g, int factor, int x) const {
    if (!is_amalgam()) {
      if (!g.letters.empty() && g.letters.back() == -x) {
        g.letters.pop_back();
      } else {
        g.letters.push_back(x);
      }
      return;
    }
    FiniteGroup const& grp = _groups[static_cast<std::size_t>(factor)];
    int                y   = grp.mul(embed(factor, g.c), x);
    if (!g.letters.empty() && letter_factor(g.letters.back()) == factor) {
      y = grp.mul(_reps[factor][static_cast<std::size_t>(letter_rep(g.letters.back()))], y);
      g.letters.pop_back();
    }
    auto const [rep, c] = split(factor, y);
    if (rep != 0) {
      g.letters.push_back(make_letter(rep, factor));
    }
    g.c = c;
  }

  Element Instance::element_of(int factor, int x) const {
    Element g = identity();
    if (factor == kFactorC) {
      g.c = x;
      return g;
    }
    mul_letter(g, factor, x);
    return g;
  }

  Element Instance::normal_form(Word const& word) const {
    Element g = identity();
    for (auto const& l : word) {
      if (!is_amalgam()) {
        if (l.factor != -1 || l.value == 0 || std::abs(l.value) > _rank) {
          throw Error(ErrorKind::UnknownLetter, "letter is not a free generator");
        }
        mul_letter(g, kFactorA, l.value);
        continue;
      }
      if (l.factor < kFactorA || l.factor > kFactorC || l.value < 0
          || static_cast<std::size_t>(l.value)
                 >= _groups[static_cast<std::size_t>(l.factor)].order()) {
        throw Error(ErrorKind::UnknownLetter, "letter is not an element of A, B or C");
      }
      if (l.factor == kFactorC) {
        mul_letter(g, kFactorA, embed(kFactorA, l.value));
      } else {
        mul_letter(g, l.factor, l.value);
      }
    }
    return g;
  }

  Element Instance::multiply(Element const& a, Element const& b) const {
    Element r = a;
    if (!is_amalgam()) {
      for (auto x : b.letters) {
        mul_letter(r, kFactorA, x);
      }
      return r;
    }
    r.letters.reserve(a.letters.size() + b.letters.size());
    for (auto l : b.letters) {
      int const f = letter_factor(l);
      mul_letter(r, f, _reps[f][static_cast<std::size_t>(letter_rep(l))]);
    }
    mul_letter(r, kFactorA, embed(kFactorA, b.c));
    return r;
  }

  Element Instance::invert(Element const& a) const {
    Element r = identity();
    if (!is_amalgam()) {
      r.letters.reserve(a.letters.size());
      for (auto it = a.letters.rbegin(); it != a.letters.rend(); ++it) {
        r.letters.push_back(-*it);
      }
      return r;
    }
    r.letters.reserve(a.letters.size());
    mul_letter(r, kFactorA, embed(kFactorA, _groups[kFactorC].inv(a.c)));
    for (auto it = a.letters.rbegin(); it != a.letters.rend(); ++it) {
      int const f = letter_factor(*it);
      auto const& grp = _groups[static_cast<std::size_t>(f)];
      mul_letter(r, f, grp.inv(_reps[f][static_cast<std::size_t>(letter_rep(*it))]));
    }
    return r;
  }

  Element Instance::power(Element const& a, int exponent) const {
    Element base = exponent < 0 ? invert(a) : a;
    Element r    = identity();
    for (int i = 0; i < std::abs(exponent); ++i) {
      r = multiply(r, base);
    }
    return r;
  }

  Word Instance::parse_word(std::string_view text) const {
    Word        word;
    std::string token;
    auto        flush = [&]() {
      if (token.empty()) {
        return;
      }
      int         exponent = 1;
      std::string base     = token;
      if (auto caret = token.rfind('^'); caret != std::string::npos) {
        base                  = token.substr(0, caret);
        std::string const exp = token.substr(caret + 1);
        auto [ptr, ec] = std::from_chars(exp.data(), exp.data() + exp.size(), exponent);
        if (ec != std::errc() || ptr != exp.data() + exp.size()) {
          throw Error(ErrorKind::ParseError, "bad exponent in token '" + token + "'");
        }
      }
      token.clear();
      if (base == "e") {
        return;
      }
      WordLetter letter;
      if (!is_amalgam()) {
        auto it = std::find(_generator_names.begin(), _generator_names.end(), base);
        if (it == _generator_names.end()) {
          throw Error(ErrorKind::UnknownLetter, "unknown generator '" + base + "'");
        }
        letter.value = static_cast<int>(it - _generator_names.begin()) + 1;
        if (exponent < 0) {
          letter.value = -letter.value;
        }
        for (int i = 0; i < std::abs(exponent); ++i) {
          word.push_back(letter);
        }
        return;
      }
      if (base.size() < 3 || base[1] != ':') {
        throw Error(ErrorKind::UnknownLetter,
                    "amalgam letters are written A:name, B:name or C:name, got '" + base
                        + "'");
      }
      switch (base[0]) {
        case 'A': letter.factor = kFactorA; break;
        case 'B': letter.factor = kFactorB; break;
        case 'C': letter.factor = kFactorC; break;
        default:
          throw Error(ErrorKind::UnknownLetter, "unknown factor in '" + base + "'");
      }
      auto const& grp = _groups[static_cast<std::size_t>(letter.factor)];
      auto        idx = grp.find(base.substr(2));
      if (!idx) {
        throw Error(ErrorKind::UnknownLetter, "unknown element '" + base + "'");
      }
      letter.value = exponent < 0 ? grp.inv(*idx) : *idx;
      for (int i = 0; i < std::abs(exponent); ++i) {
        word.push_back(letter);
      }
    };
    for (char ch : text) {
      if (ch == ' ' || ch == '\t' || ch == '\n' || ch == '*') {
        flush();
      } else {
        token += ch;
      }
    }
    flush();
    return word;
  }

  std::string Instance::format(Element const& g) const {
    std::string out;
    auto        append = [&out](std::string const& tok) {
      if (!out.empty()) {
        out += ' ';
      }
      out += tok;
    };
    if (!is_amalgam()) {
      std::size_t i = 0;
      while (i < g.letters.size()) {
        std::size_t j = i;
        while (j < g.letters.size() && g.letters[j] == g.letters[i]) {
          ++j;
        }
        int const   x    = g.letters[i];
        int const   run  = static_cast<int>(j - i) * (x < 0 ? -1 : 1);
        std::string name = _generator_names[static_cast<std::size_t>(std::abs(x) - 1)];
        append(run == 1 ? name : name + "^" + std::to_string(run));
        i = j;
      }
    } else {
      for (auto l : g.letters) {
        int const f = letter_factor(l);
        append(std::string(f == kFactorA ? "A:" : "B:")
               + _groups[static_cast<std::size_t>(f)].name(
                   _reps[f][static_cast<std::size_t>(letter_rep(l))]));
      }
      if (g.c != _groups[kFactorC].identity()) {
        append("C:" + _groups[kFactorC].name(g.c));
      }
    }
    return out.empty() ? "e" : out;
  }

  Instance Instance::rerooted() const {
    if (!is_amalgam()) {
      return *this;
    }
    return amalgam(_groups[1], _groups[0], _groups[2], Embedding{_embed[1]},
                   Embedding{_embed[0]});
  }

}  // namespace treeqm
