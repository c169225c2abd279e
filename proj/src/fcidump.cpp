#include "qembed/fcidump.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>
#include <vector>

#include "qembed/errors.hpp"

namespace qembed {

namespace {

using Index4 = std::array<int, 4>;

struct Orbit {
  std::vector<Index4> idx;
  std::vector<bool> conj;
};

Orbit eri_orbit(const Index4& a, bool gamma) {
  const auto [i, j, k, l] = a;
  Orbit o;
  o.idx = {{i, j, k, l}, {k, l, i, j}, {j, i, l, k}, {l, k, j, i}};
  o.conj = {false, false, true, true};
  if (gamma) {
    for (const Index4& x :
         {Index4{j, i, k, l}, Index4{i, j, l, k}, Index4{l, k, i, j}, Index4{k, l, j, i}}) {
      o.idx.push_back(x);
      o.conj.push_back(false);
    }
  }
  return o;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

double parse_double(const std::string& tok, int line) {
  // Accept Fortran-style exponents.
  std::string t = tok;
  for (auto& c : t)
    if (c == 'D' || c == 'd') c = 'e';
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &pos);
  } catch (const std::exception&) {
    throw ParseError("invalid number '" + tok + "'", line);
  }
  if (pos != t.size()) throw ParseError("invalid number '" + tok + "'", line);
  return v;
}

int parse_int(const std::string& tok, int line) {
  int v = 0;
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw ParseError("invalid integer '" + tok + "'", line);
  return v;
}

struct Header {
  int norb = -1;
  int nelec = -1;
  int ms2 = 0;
  bool complex = false;
  bool gamma = false;
};

Header parse_header(const std::string& text, int line) {
  Header h;
  std::string body = upper(text);
  const auto fci = body.find("&FCI");
  if (fci == std::string::npos) throw ParseError("missing &FCI header", 1);
  body = body.substr(fci + 4);
  const auto end = body.find("&END");
  if (end != std::string::npos) body = body.substr(0, end);
  for (auto& c : body)
    if (c == ',' || c == '\n' || c == '\r' || c == '\t') c = ' ';
  std::istringstream is(body);
  std::string tok, pending_key;
  std::map<std::string, std::string> kv;
  // Tokens look like KEY=VALUE; ORBSYM lists are skipped.
  while (is >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) {
      if (!pending_key.empty() && pending_key != "ORBSYM") kv[pending_key] = tok;
      continue;
    }
    pending_key = tok.substr(0, eq);
    const std::string val = tok.substr(eq + 1);
    if (!val.empty()) kv[pending_key] = val;
  }
  auto get = [&](const std::string& k) -> std::string {
    auto it = kv.find(k);
    return it == kv.end() ? std::string{} : it->second;
  };
  if (get("NORB").empty()) throw ParseError("header lacks NORB", line);
  h.norb = parse_int(get("NORB"), line);
  if (h.norb < 0) throw ParseError("NORB must be non-negative", line);
  if (!get("NELEC").empty()) h.nelec = parse_int(get("NELEC"), line);
  if (!get("MS2").empty()) h.ms2 = parse_int(get("MS2"), line);
  if (!get("COMPLEX").empty()) h.complex = parse_int(get("COMPLEX"), line) != 0;
  if (!get("GAMMA").empty()) h.gamma = parse_int(get("GAMMA"), line) != 0;
  return h;
}

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

}  // namespace

ActiveSpaceHamiltonian read_fcidump(std::istream& in) {
  std::string line, header_text;
  int lineno = 0;
  bool header_done = false;
  while (std::getline(in, line)) {
    ++lineno;
    header_text += line + "\n";
    const std::string u = upper(trim(line));
    if (u.find("&END") != std::string::npos || u == "/" || u == "&") {
      header_done = true;
      break;
    }
  }
  if (!header_done) throw ParseError("unterminated &FCI header", lineno);
  const Header hd = parse_header(header_text, lineno);
  const int n = hd.norb;

  ActiveSpaceHamiltonian H(n);
  H.gamma_point = hd.gamma;
  H.n_electrons = hd.nelec;
  H.ms2 = hd.ms2;
  std::vector<char> h_set(static_cast<std::size_t>(n) * n, 0);
  std::vector<char> v_set(H.eri.data().size(), 0);
  bool e0_set = false;

  auto assign = [&](cplx& slot, char& flag, cplx v, int ln) {
    if (flag && std::abs(slot - v) > kSymmetryTolerance)
      throw ParseError("conflicting duplicate integral (symmetry violation)", ln);
    slot = v;
    flag = 1;
  };

  const std::size_t expected = hd.complex ? 6 : 5;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok.size() != expected)
      throw ParseError("expected " + std::to_string(expected) + " fields (COMPLEX=" +
                           std::to_string(hd.complex) + "), found " +
                           std::to_string(tok.size()),
                       lineno);
    const double re = parse_double(tok[0], lineno);
    const double im = hd.complex ? parse_double(tok[1], lineno) : 0.0;
    const std::size_t o = expected - 4;
    Index4 ix{};
    for (int k = 0; k < 4; ++k) {
      ix[k] = parse_int(tok[o + k], lineno);
      if (ix[k] < 0 || ix[k] > n)
        throw ParseError("orbital index " + std::to_string(ix[k]) +
                             " out of range [1, " + std::to_string(n) + "]",
                         lineno);
    }
    const cplx v{re, im};
    if (hd.gamma && im != 0.0)
      throw ParseError("imaginary entry in a GAMMA=1 file", lineno);
    const auto [i, j, k, l] = ix;
    if (i == 0 && j == 0 && k == 0 && l == 0) {
      if (im != 0.0) throw ParseError("constant energy must be real", lineno);
      if (e0_set && std::abs(H.e0 - re) > kSymmetryTolerance)
        throw ParseError("conflicting constant energy lines", lineno);
      H.e0 = re;
      e0_set = true;
    } else if (i > 0 && j > 0 && k == 0 && l == 0) {
      const int p = i - 1, q = j - 1;
      assign(H.h(p, q), h_set[p * n + q], v, lineno);
      assign(H.h(q, p), h_set[q * n + p], std::conj(v), lineno);
    } else if (i > 0 && j > 0 && k > 0 && l > 0) {
      const Orbit orb = eri_orbit({i - 1, j - 1, k - 1, l - 1}, hd.gamma);
      for (std::size_t m = 0; m < orb.idx.size(); ++m) {
        const auto [a, b, c, d] = orb.idx[m];
        const std::size_t flat = ((static_cast<std::size_t>(a) * n + b) * n + c) * n + d;
        assign(H.eri.data()[flat], v_set[flat], orb.conj[m] ? std::conj(v) : v, lineno);
      }
    } else {
      throw ParseError("unsupported index pattern", lineno);
    }
  }
  H.validate();
  return H;
}

ActiveSpaceHamiltonian load_fcidump(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open integral file '" + path + "'");
  return read_fcidump(in);
}

void write_fcidump(std::ostream& out, const ActiveSpaceHamiltonian& H) {
  const int n = H.n_orb();
  bool any_imag = false;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) any_imag |= H.h(p, q).imag() != 0.0;
  for (const auto& v : H.eri.data()) any_imag |= v.imag() != 0.0;
  const bool cplx_out = any_imag && !H.gamma_point;
  out << "&FCI NORB=" << n << ",NELEC=" << H.n_electrons << ",MS2=" << H.ms2
      << ",COMPLEX=" << (cplx_out ? 1 : 0) << ",GAMMA=" << (H.gamma_point ? 1 : 0)
      << " &END\n";
  auto emit = [&](cplx v, int i, int j, int k, int l) {
    out << format_double(v.real());
    if (cplx_out) out << ' ' << format_double(v.imag());
    out << ' ' << i << ' ' << j << ' ' << k << ' ' << l << '\n';
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const Index4 me{i, j, k, l};
          const Orbit orb = eri_orbit(me, H.gamma_point);
          bool canonical = true;
          for (const auto& x : orb.idx) canonical &= !(x < me);
          if (!canonical) continue;
          const cplx v = H.eri(i, j, k, l);
          if (v != cplx{}) emit(v, i + 1, j + 1, k + 1, l + 1);
        }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      if (H.h(i, j) != cplx{}) emit(H.h(i, j), i + 1, j + 1, 0, 0);
  emit(H.e0, 0, 0, 0, 0);
}

void save_fcidump(const std::string& path, const ActiveSpaceHamiltonian& H) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write integral file '" + path + "'");
  write_fcidump(out, H);
}

}  // namespace qembed
