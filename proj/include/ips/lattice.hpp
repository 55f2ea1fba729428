#pragma once
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ips {

// One-dimensional geometries.
//  ring:    sites 0..n-1, bond x couples (x, x+1 mod n); n >= 3.
//  segment: particles live on 1..n-1 (index 0 of the site vector is unused and
//           kept at 0), bond x couples (x, x+1) for x = 1..n-2, and boundary
//           reservoirs act on sites 1 and n-1; n >= 2.
enum class Topology { ring, segment };

struct Lattice {
  int n = 0;
  Topology topology = Topology::ring;

  bool ring() const { return topology == Topology::ring; }
  int first_site() const { return ring() ? 0 : 1; }
  int site_count() const { return ring() ? n : n - 1; }
  int bond_count() const { return ring() ? n : n - 2; }
  int first_bond() const { return ring() ? 0 : 1; }
  // right neighbour across bond x
  int bond_right(int x) const { return ring() ? (x + 1) % n : x + 1; }
  int fold(long long x) const {
    long long m = ((x % n) + n) % n;
    return int(m);
  }
};

inline Lattice build_lattice(int n, Topology topology) {
  if (topology == Topology::ring && n < 3)
    throw std::invalid_argument("ring lattice needs n >= 3");
  if (topology == Topology::segment && n < 2)
    throw std::invalid_argument("segment lattice needs n >= 2");
  return Lattice{n, topology};
}

// Site-state vector. Exclusion: values in {0,1}. Species: labels 0,1,2
// (printed A,B,C). Stored dense, one byte per site.
enum class StateKind : uint8_t { exclusion, species };

struct Configuration {
  StateKind kind = StateKind::exclusion;
  std::vector<uint8_t> sites;

  int size() const { return int(sites.size()); }
  int particle_count() const {
    int c = 0;
    for (uint8_t s : sites) c += (s != 0);
    return c;
  }
  // species model: number of sites carrying label a
  int species_count(uint8_t a) const {
    int c = 0;
    for (uint8_t s : sites) c += (s == a);
    return c;
  }
  bool operator==(const Configuration& o) const = default;
};

inline void check_site(const Configuration& c, int x) {
  if (x < 0 || x >= c.size()) throw std::out_of_range("site index");
}

// exchange site contents; involution, conserves per-species counts
inline void swap_sites(Configuration& c, int x, int y) {
  check_site(c, x);
  check_site(c, y);
  std::swap(c.sites[x], c.sites[y]);
}

inline std::string to_string(const Configuration& c) {
  std::string s;
  s.reserve(c.sites.size());
  for (uint8_t v : c.sites)
    s.push_back(c.kind == StateKind::exclusion ? char('0' + v) : char('A' + v));
  return s;
}

inline Configuration configuration_from_string(const std::string& s) {
  Configuration c;
  if (s.empty()) throw std::invalid_argument("empty configuration string");
  c.kind = (s[0] == '0' || s[0] == '1') ? StateKind::exclusion : StateKind::species;
  c.sites.reserve(s.size());
  for (char ch : s) {
    if (c.kind == StateKind::exclusion) {
      if (ch != '0' && ch != '1') throw std::invalid_argument("bad exclusion state char");
      c.sites.push_back(uint8_t(ch - '0'));
    } else {
      if (ch < 'A' || ch > 'C') throw std::invalid_argument("bad species state char");
      c.sites.push_back(uint8_t(ch - 'A'));
    }
  }
  return c;
}

// directed box averages of the raw site values (occupation or species
// indicator): right = (1/len) sum_{y=x+1}^{x+len}, left over x-len..x-1.
enum class BoxSide { right, left };

template <class Sel>
double box_average_sel(const Configuration& c, const Lattice& lat, int x, int len,
                       BoxSide side, Sel sel) {
  if (len < 1) throw std::invalid_argument("box length must be >= 1");
  if (!lat.ring()) throw std::invalid_argument("box averages defined on the ring");
  if (len > lat.n) throw std::invalid_argument("box longer than the ring");
  double acc = 0;
  for (int j = 1; j <= len; ++j) {
    int y = side == BoxSide::right ? lat.fold(x + j) : lat.fold(x - j);
    acc += sel(c.sites[y]);
  }
  return acc / len;
}

inline double box_average(const Configuration& c, const Lattice& lat, int x, int len,
                          BoxSide side = BoxSide::right) {
  return box_average_sel(c, lat, x, len, side,
                         [](uint8_t v) { return v != 0 ? 1.0 : 0.0; });
}

}  // namespace ips
