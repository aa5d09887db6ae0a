#include "effbasis/fermion.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace effbasis::hamiltonian {

namespace {

[[noreturn]] void fail(const std::string& path, int line,
                       const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

// assign one h entry plus its transpose
void set_h(FermionHamiltonian& fh, int i, int j, double v) {
  fh.h1(i, j) = v;
  fh.h1(j, i) = v;
}

// assign one chemist-convention (ij|kl) entry over the 8-fold symmetry group
void set_g(FermionHamiltonian& fh, int i, int j, int k, int l, double v) {
  fh.g2(i, j, k, l) = v;
  fh.g2(j, i, k, l) = v;
  fh.g2(i, j, l, k) = v;
  fh.g2(j, i, l, k) = v;
  fh.g2(k, l, i, j) = v;
  fh.g2(l, k, i, j) = v;
  fh.g2(k, l, j, i) = v;
  fh.g2(l, k, j, i) = v;
}

// pull an integer field like NORB=4 out of the namelist header text
bool header_int(const std::string& header, const std::string& key, int& out) {
  std::size_t pos = header.find(key + "=");
  if (pos == std::string::npos) return false;
  // reject partial-word hits such as the NORB inside SPINORB
  if (pos > 0 && (std::isalnum(std::uint8_t(header[pos - 1])) != 0)) {
    return header_int(header.substr(pos + 1), key, out);
  }
  out = std::stoi(header.substr(pos + key.size() + 1));
  return true;
}

FermionHamiltonian parse_text(const std::string& path, std::istream& in) {
  std::string line;
  int lineno = 0;

  // namelist header: everything from &FCI through &END (or a bare '/')
  std::string header;
  bool header_done = false;
  while (!header_done && std::getline(in, line)) {
    ++lineno;
    header += " " + line;
    std::size_t e = header.find("&END");
    if (e != std::string::npos) {
      header = header.substr(0, e);
      header_done = true;
    } else if (std::size_t s = header.find('/'); s != std::string::npos) {
      header = header.substr(0, s);
      header_done = true;
    }
  }
  if (!header_done) fail(path, lineno, "missing &END terminator in header");
  if (header.find("&FCI") == std::string::npos)
    fail(path, 1, "missing &FCI header");

  FermionHamiltonian fh;
  if (!header_int(header, "NORB", fh.n_spatial))
    fail(path, 1, "header lacks NORB");
  if (fh.n_spatial < 1 || fh.n_spatial > 32)
    fail(path, 1, "NORB out of supported range [1,32]");
  header_int(header, "NELEC", fh.n_electrons);
  header_int(header, "MS2", fh.ms2);

  const int n = fh.n_spatial;
  fh.h.assign(std::size_t(n) * n, 0.0);
  fh.g.assign(std::size_t(n) * n * n * n, 0.0);

  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    double v;
    if (!(ls >> v)) {
      std::string probe;
      std::istringstream(line) >> probe;
      if (probe.empty()) continue;  // blank line
      fail(path, lineno, "expected a numeric record");
    }
    int i, j, k, l;
    if (!(ls >> i >> j >> k >> l))
      fail(path, lineno, "record needs four indices after the value");
    std::string extra;
    if (ls >> extra) fail(path, lineno, "trailing content after record");
    for (int idx : {i, j, k, l})
      if (idx < 0 || idx > n)
        fail(path, lineno,
             "orbital index " + std::to_string(idx) + " out of range [0," +
                 std::to_string(n) + "]");

    if (i == 0 && j == 0 && k == 0 && l == 0) {
      fh.constant = v;
    } else if (k == 0 && l == 0) {
      if (i == 0 || j == 0) fail(path, lineno, "one-body record with index 0");
      set_h(fh, i - 1, j - 1, v);
    } else if (i != 0 && j != 0 && k != 0 && l != 0) {
      set_g(fh, i - 1, j - 1, k - 1, l - 1, v);
    } else {
      fail(path, lineno, "record mixes zero and nonzero indices");
    }
  }
  return fh;
}

FermionHamiltonian parse_json(const std::string& path,
                              const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }

  FermionHamiltonian fh;
  try {
    fh.n_spatial = doc.at("norb").get<int>();
    fh.n_electrons = doc.value("nelec", 0);
    fh.ms2 = doc.value("ms2", 0);
    fh.constant = doc.value("constant", 0.0);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  if (fh.n_spatial < 1 || fh.n_spatial > 32)
    throw std::runtime_error(path + ": norb out of supported range [1,32]");

  const int n = fh.n_spatial;
  fh.h.assign(std::size_t(n) * n, 0.0);
  fh.g.assign(std::size_t(n) * n * n * n, 0.0);

  auto check = [&](int idx, const char* where) {
    if (idx < 1 || idx > n)
      throw std::runtime_error(path + ": " + where + " index " +
                               std::to_string(idx) + " out of range [1," +
                               std::to_string(n) + "]");
  };
  for (const auto& rec : doc.value("one_body", nlohmann::json::array())) {
    if (!rec.is_array() || rec.size() != 3)
      throw std::runtime_error(path + ": one_body records are [value, i, j]");
    int i = rec[1].get<int>(), j = rec[2].get<int>();
    check(i, "one_body");
    check(j, "one_body");
    set_h(fh, i - 1, j - 1, rec[0].get<double>());
  }
  for (const auto& rec : doc.value("two_body", nlohmann::json::array())) {
    if (!rec.is_array() || rec.size() != 5)
      throw std::runtime_error(path +
                               ": two_body records are [value, i, j, k, l]");
    int i = rec[1].get<int>(), j = rec[2].get<int>();
    int k = rec[3].get<int>(), l = rec[4].get<int>();
    for (int idx : {i, j, k, l}) check(idx, "two_body");
    set_g(fh, i - 1, j - 1, k - 1, l - 1, rec[0].get<double>());
  }
  return fh;
}

}  // namespace

void FermionHamiltonian::check_invariants() const {
  const int n = n_spatial;
  if (int(h.size()) != n * n || std::size_t(g.size()) != std::size_t(n) * n * n * n)
    throw std::logic_error("FermionHamiltonian: tensor sizes inconsistent");
  if (!std::isfinite(constant))
    throw std::logic_error("FermionHamiltonian: constant not finite");
  for (double v : h)
    if (!std::isfinite(v)) throw std::logic_error("h entries must be finite");
  for (double v : g)
    if (!std::isfinite(v)) throw std::logic_error("g entries must be finite");
  for (int k = 0; k < n; ++k)
    for (int l = k + 1; l < n; ++l)
      if (std::abs(h1(k, l) - h1(l, k)) > 1e-10)
        throw std::logic_error("h must be symmetric");
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l)
      for (int m = 0; m < n; ++m)
        for (int o = 0; o < n; ++o) {
          double ref = g2(k, l, m, o);
          if (std::abs(g2(l, k, m, o) - ref) > 1e-10 ||
              std::abs(g2(k, l, o, m) - ref) > 1e-10 ||
              std::abs(g2(m, o, k, l) - ref) > 1e-10)
            throw std::logic_error("g must be 8-fold symmetric");
        }
}

FermionHamiltonian load_fcidump(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();

  // content sniff: first non-space byte decides text vs JSON
  std::size_t p = text.find_first_not_of(" \t\r\n");
  if (p == std::string::npos) throw std::runtime_error(path + ": empty file");

  FermionHamiltonian fh;
  if (text[p] == '{') {
    fh = parse_json(path, text);
  } else {
    std::istringstream is(text);
    fh = parse_text(path, is);
  }
  fh.check_invariants();
  return fh;
}

}  // namespace effbasis::hamiltonian
