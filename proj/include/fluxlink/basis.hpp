#pragma once

#include "fluxlink/lattice.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fluxlink::model {

// Words are base-3 integers: digit k holds m_k + 1 for link k.
using Word = std::uint64_t;

inline constexpr int max_links = 40;

enum class BasisKind { full, gauge_sector, charge_sector, gauss_truncated };

// signed: Gauss law carries the incoming/outgoing signs of the vertex star.
// unsigned: plain sum of S^z over the star, as in the two-body Hamiltonian.
enum class Convention { signed_gauss, unsigned_gauss };

std::string to_string(BasisKind k);
BasisKind parse_basis_kind(const std::string& s);

Word pow3(int k);
int digit(Word w, int k);
inline int flux(Word w, int k) { return digit(w, k) - 1; }
Word with_flux(Word w, int k, int m);
void decode(Word w, int n_links, std::int8_t* m);
Word encode(const std::int8_t* m, int n_links);

// Coefficient of link `link` in the Gauss operator of `vertex` (0 if absent).
int gauss_coeff(const lattice::LatticeGeometry& g, Convention c, int vertex, int link);

// Bipartite staggering: sign of each link at its even-parity endpoint.
// Throws when the geometry is not bipartite.
std::vector<int> link_stagger(const lattice::LatticeGeometry& g);

// Charge conserved by the two-body Hamiltonian: sum_k q_k m_k.
std::vector<int> charge_weights(const lattice::LatticeGeometry& g, Convention c);

struct BasisOptions {
    Convention convention = Convention::signed_gauss;
    int gauss_cap = 4;            // for gauss_truncated: sum_v G_v^2 <= cap
    bool charge_zero = true;      // gauss_truncated also restricted to Q = 0
    std::size_t max_states = 20'000'000;
};

class GaugeBasis {
public:
    GaugeBasis(const lattice::LatticeGeometry& g, BasisKind kind, const BasisOptions& opt = {});

    BasisKind kind() const { return kind_; }
    Convention convention() const { return opt_.convention; }
    const BasisOptions& options() const { return opt_; }
    int n_links() const { return n_links_; }
    std::size_t size() const { return kind_ == BasisKind::full ? full_size_ : words_.size(); }
    Word word(std::size_t i) const { return kind_ == BasisKind::full ? Word(i) : words_[i]; }
    // Position of w, or -1 when it is not in the basis.
    long long index_of(Word w) const;
    bool contains(Word w) const { return index_of(w) >= 0; }
    std::string tag() const { return to_string(kind_); }

private:
    BasisKind kind_;
    BasisOptions opt_;
    int n_links_;
    std::size_t full_size_ = 0;
    std::vector<Word> words_;
};

// Dimension estimate used in capacity errors.
double full_space_size(int n_links);

// Signed (or unsigned) Gauss value at each vertex for a word.
std::vector<int> gauss_values(const lattice::LatticeGeometry& g, Convention c, Word w);

} // namespace fluxlink::model
