#include "kpls/descriptors.hpp"

#include "kpls/errors.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

namespace kpls {

void MolGraph::validate() const {
    if (atom_count < 1) throw data_error("molgraph: atom count must be positive");
    std::set<std::pair<int, int>> seen;
    for (const auto& [a, b] : bonds) {
        if (a < 0 || a >= atom_count || b < 0 || b >= atom_count)
            throw data_error("molgraph: bond (" + std::to_string(a + 1) + ", " +
                             std::to_string(b + 1) + ") references an atom outside 1.." +
                             std::to_string(atom_count));
        if (a == b)
            throw data_error("molgraph: self-loop on atom " + std::to_string(a + 1));
        auto key = std::minmax(a, b);
        if (!seen.insert(key).second)
            throw data_error("molgraph: duplicate bond (" + std::to_string(key.first + 1) + ", " +
                             std::to_string(key.second + 1) + ")");
    }
    for (const auto& [name, values] : properties)
        if (values.size() != atom_count)
            throw data_error("molgraph: property '" + name + "' has " +
                             std::to_string(values.size()) + " values for " +
                             std::to_string(atom_count) + " atoms");
}

DistanceMatrix topological_distances(const MolGraph& graph) {
    graph.validate();
    const int n = graph.atom_count;

    std::vector<std::vector<int>> adjacency(static_cast<size_t>(n));
    for (const auto& [a, b] : graph.bonds) {
        adjacency[static_cast<size_t>(a)].push_back(b);
        adjacency[static_cast<size_t>(b)].push_back(a);
    }

    DistanceMatrix result;
    result.values = Eigen::MatrixXi::Constant(n, n, -1);
    for (int source = 0; source < n; ++source) {
        result.values(source, source) = 0;
        std::deque<int> queue{source};
        while (!queue.empty()) {
            const int atom = queue.front();
            queue.pop_front();
            const int next = result.values(source, atom) + 1;
            for (int neighbor : adjacency[static_cast<size_t>(atom)]) {
                if (result.values(source, neighbor) < 0) {
                    result.values(source, neighbor) = next;
                    queue.push_back(neighbor);
                }
            }
        }
    }
    result.connected = (result.values.array() >= 0).all();
    return result;
}

RadVector rad_autocorrelation(const MolGraph& graph, const std::string& property_name,
                              int max_bin) {
    auto it = graph.properties.find(property_name);
    if (it == graph.properties.end())
        throw data_error("molgraph has no property '" + property_name + "'");
    if (max_bin < 0) throw config_error("rad_autocorrelation: max_bin must be >= 0");

    const Vector& p = it->second;
    const DistanceMatrix distances = topological_distances(graph);
    const int n = graph.atom_count;

    RadVector rad;
    rad.property_name = property_name;
    rad.bins = Vector::Zero(max_bin + 1);

    // Products are gathered per bin and summed in sorted order, so the result
    // is independent of the atom labeling down to the last bit.
    std::vector<std::vector<double>> products(static_cast<size_t>(max_bin) + 1);
    for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) {
            const int d = distances.values(x, y);
            if (d < 0) {
                rad.dropped_unreachable_pairs = true;
                continue;
            }
            if (d > max_bin) continue;
            products[static_cast<size_t>(d)].push_back(p[x] * p[y]);
        }
    }
    for (int d = 0; d <= max_bin; ++d) {
        auto& bin = products[static_cast<size_t>(d)];
        std::sort(bin.begin(), bin.end());
        double sum = 0.0;
        for (double value : bin) sum += value;
        rad.bins[d] = sum / static_cast<double>(n);
    }
    return rad;
}

int SimilMatrix::residue_index(char code) const {
    const auto pos = residue_order.find(code);
    return pos == std::string::npos ? -1 : static_cast<int>(pos);
}

Vector simil_expand(const std::string& sequence, const SimilMatrix& matrix) {
    if (matrix.values.rows() != 20 || matrix.values.cols() != 20)
        throw data_error("simil matrix must be 20x20");
    if (sequence.empty()) throw data_error("simil_expand: empty sequence");

    Vector expanded(20 * static_cast<Index>(sequence.size()));
    for (size_t k = 0; k < sequence.size(); ++k) {
        const int column = matrix.residue_index(sequence[k]);
        if (column < 0)
            throw data_error("unknown residue code '" + std::string(1, sequence[k]) +
                             "' at position " + std::to_string(k + 1));
        expanded.segment(static_cast<Index>(20 * k), 20) = matrix.values.col(column);
    }
    return expanded;
}

double class_score(const std::array<bool, 8>& bits_a, const std::array<bool, 8>& bits_b,
                   const std::array<double, 8>& weights) {
    double total = 0.0;
    double agreement = 0.0;
    for (size_t k = 0; k < 8; ++k) {
        if (!(weights[k] > 0.0))
            throw config_error("class_score: weights must be positive");
        total += weights[k];
        if (bits_a[k] == bits_b[k]) agreement += weights[k];
    }
    return agreement / total;
}

// ---------------------------------------------------------------------------
// File formats

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::istringstream stream(line);
    std::vector<std::string> tokens;
    std::string token;
    while (stream >> token) tokens.push_back(token);
    return tokens;
}

double parse_real(const std::string& token, const std::string& context) {
    try {
        size_t consumed = 0;
        const double value = std::stod(token, &consumed);
        if (consumed != token.size()) throw std::invalid_argument(token);
        return value;
    } catch (const std::exception&) {
        throw data_error("expected a number, got '" + token + "' " + context);
    }
}

} // namespace

MolGraph load_molgraph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open molgraph file '" + path + "'");

    MolGraph graph;
    std::string line;
    size_t line_number = 0;
    auto next_tokens = [&](std::vector<std::string>& out) {
        while (std::getline(in, line)) {
            ++line_number;
            out = tokenize(line);
            if (!out.empty() && out[0][0] != '#') return true;
        }
        return false;
    };

    std::vector<std::string> tokens;
    if (!next_tokens(tokens) || tokens.size() != 2 || tokens[0] != "atoms")
        throw data_error("molgraph '" + path + "': expected 'atoms N' on the first line");
    graph.atom_count = static_cast<int>(parse_real(tokens[1], "for atom count"));

    if (!next_tokens(tokens) || tokens.size() != 2 || tokens[0] != "bonds")
        throw data_error("molgraph '" + path + "': expected 'bonds M' after the atom count");
    const int bond_count = static_cast<int>(parse_real(tokens[1], "for bond count"));

    for (int k = 0; k < bond_count; ++k) {
        if (!next_tokens(tokens) || tokens.size() != 2)
            throw data_error("molgraph '" + path + "': expected bond pair " +
                             std::to_string(k + 1) + " of " + std::to_string(bond_count));
        // Bond indices are 1-based on disk.
        const int a = static_cast<int>(parse_real(tokens[0], "in bond list")) - 1;
        const int b = static_cast<int>(parse_real(tokens[1], "in bond list")) - 1;
        graph.bonds.emplace_back(a, b);
    }

    while (next_tokens(tokens)) {
        if (tokens.size() != 2 || tokens[0] != "property")
            throw data_error("molgraph '" + path + "': expected 'property NAME' at line " +
                             std::to_string(line_number));
        const std::string name = tokens[1];
        Vector values(graph.atom_count);
        Index filled = 0;
        while (filled < graph.atom_count && next_tokens(tokens))
            for (const auto& token : tokens) {
                if (filled >= graph.atom_count)
                    throw data_error("molgraph '" + path + "': too many values for property '" +
                                     name + "'");
                values[filled++] = parse_real(token, "in property '" + name + "'");
            }
        if (filled != graph.atom_count)
            throw data_error("molgraph '" + path + "': property '" + name + "' has " +
                             std::to_string(filled) + " of " + std::to_string(graph.atom_count) +
                             " values");
        graph.properties[name] = std::move(values);
    }

    graph.validate();
    return graph;
}

SimilMatrix load_simil_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open simil matrix file '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw data_error("simil matrix '" + path + "': empty file");
    const std::vector<std::string> header = tokenize(line);

    SimilMatrix matrix;
    if (header.size() == 1 && header[0].size() == 20) {
        matrix.residue_order = header[0];
    } else if (header.size() == 20) {
        for (const auto& token : header) {
            if (token.size() != 1)
                throw data_error("simil matrix '" + path + "': residue header entry '" + token +
                                 "' is not a single letter");
            matrix.residue_order += token[0];
        }
    } else {
        throw data_error("simil matrix '" + path + "': header must list 20 residue codes");
    }

    std::string sorted = matrix.residue_order;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != std::string(standard_residues))
        throw data_error("simil matrix '" + path +
                         "': header is not a permutation of the 20 standard residues");

    matrix.values.resize(20, 20);
    for (int r = 0; r < 20; ++r) {
        if (!std::getline(in, line))
            throw data_error("simil matrix '" + path + "': expected 20 rows, got " +
                             std::to_string(r));
        const std::vector<std::string> tokens = tokenize(line);
        if (tokens.size() != 20)
            throw data_error("simil matrix '" + path + "': row " + std::to_string(r + 1) +
                             " has " + std::to_string(tokens.size()) + " values, expected 20");
        for (int c = 0; c < 20; ++c)
            matrix.values(r, c) =
                parse_real(tokens[static_cast<size_t>(c)], "in simil matrix row " +
                                                                std::to_string(r + 1));
    }
    return matrix;
}

SimilMatrix identity_simil_matrix() {
    SimilMatrix matrix;
    matrix.residue_order = std::string(standard_residues);
    matrix.values = Matrix::Identity(20, 20);
    return matrix;
}

} // namespace kpls
