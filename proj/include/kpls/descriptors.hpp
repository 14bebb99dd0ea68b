#pragma once

#include "kpls/dataset.hpp"

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace kpls {

inline constexpr std::string_view standard_residues = "ACDEFGHIKLMNPQRSTVWY";

/// Atom-bond graph with named per-atom property vectors. Bonds are unordered
/// 0-based index pairs; no self-loops or duplicates.
struct MolGraph {
    int atom_count = 0;
    std::vector<std::pair<int, int>> bonds;
    std::map<std::string, Vector> properties;

    void validate() const;
};

/// All-pairs minimum bond path lengths; -1 marks unreachable pairs and
/// connected is false whenever any exist.
struct DistanceMatrix {
    Eigen::MatrixXi values;
    bool connected = true;
};

/// Autocorrelation bins indexed by topological distance 0..max_bin.
struct RadVector {
    Vector bins;
    std::string property_name;
    bool dropped_unreachable_pairs = false;
};

/// 20x20 residue similarity matrix; residue_order names the row/column order
/// and must be a permutation of the standard one-letter codes.
struct SimilMatrix {
    Matrix values;
    std::string residue_order;

    /// Index of a residue code in residue_order, or -1 if unknown.
    int residue_index(char code) const;
};

/// Breadth-first search from every atom.
DistanceMatrix topological_distances(const MolGraph& graph);

/// bins[d] = (1/n) sum over ordered atom pairs (x, y) at bond distance d of
/// P_x * P_y; bin 0 carries the self terms. Pairs beyond max_bin, and
/// unreachable pairs, contribute nothing.
RadVector rad_autocorrelation(const MolGraph& graph, const std::string& property_name,
                              int max_bin);

/// Concatenates, in sequence order, the matrix column of each residue;
/// output length is 20 x sequence length. Errors name the 1-based position
/// of an unknown residue code.
Vector simil_expand(const std::string& sequence, const SimilMatrix& matrix);

/// Weighted bit-agreement score in [0, 1]: sum of weights where the two bit
/// vectors agree, over the total weight.
double class_score(const std::array<bool, 8>& bits_a, const std::array<bool, 8>& bits_b,
                   const std::array<double, 8>& weights);

/// Structured text: "atoms N", "bonds M" followed by M 1-based pairs, then
/// "property NAME" blocks of N reals.
MolGraph load_molgraph(const std::string& path);

/// 21-line text file: residue-order header, then 20 rows of 20 reals.
SimilMatrix load_simil_matrix(const std::string& path);

/// Identity matrix in standard residue order.
SimilMatrix identity_simil_matrix();

} // namespace kpls
