#include "qclt/operators.hpp"

#include "qclt/eig.hpp"
#include "qclt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

namespace qclt {

std::size_t dim_cap() {
    static const std::size_t cap = [] {
        if (const char* s = std::getenv("BE_LAB_DIM_CAP")) {
            char* end = nullptr;
            const unsigned long long v = std::strtoull(s, &end, 10);
            if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
        }
        return static_cast<std::size_t>(1) << 14;
    }();
    return cap;
}

void check_dim(std::size_t dim) {
    if (dim > dim_cap())
        throw resource_limit("Hilbert dimension " + std::to_string(dim) +
                             " exceeds cap " + std::to_string(dim_cap()));
}

Matrix pauli(char p) {
    Matrix m(2, 2);
    switch (p) {
        case 'I': m(0, 0) = 1; m(1, 1) = 1; break;
        case 'X': m(0, 1) = 1; m(1, 0) = 1; break;
        case 'Y': m(0, 1) = cplx(0, -1); m(1, 0) = cplx(0, 1); break;
        case 'Z': m(0, 0) = 1; m(1, 1) = -1; break;
        default: throw invalid_parameter(std::string("unknown Pauli '") + p + "'");
    }
    return m;
}

LocalOperator pauli_string(const std::vector<std::size_t>& sites, const std::string& paulis,
                           cplx coeff) {
    if (sites.size() != paulis.size())
        throw invalid_parameter("pauli_string: sites/paulis length mismatch");
    if (sites.empty()) throw invalid_parameter("pauli_string: empty site list");

    std::vector<std::size_t> order(sites.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return sites[a] < sites[b]; });
    for (std::size_t i = 1; i < order.size(); ++i)
        if (sites[order[i]] == sites[order[i - 1]])
            throw invalid_parameter("pauli_string: duplicate site");

    LocalOperator op;
    Matrix block(1, 1);
    block(0, 0) = coeff;
    for (std::size_t i : order) {
        op.support.push_back(sites[i]);
        block = kron(block, pauli(paulis[i]));
    }
    op.block = std::move(block);
    return op;
}

Matrix embed(const LocalOperator& op, std::size_t N) {
    const std::size_t dim = static_cast<std::size_t>(1) << N;
    check_dim(dim);
    for (std::size_t i = 1; i < op.support.size(); ++i)
        if (op.support[i] <= op.support[i - 1])
            throw invalid_parameter("embed: support not strictly ascending");
    if (!op.support.empty() && op.support.back() >= N)
        throw invalid_parameter("embed: support site out of range");

    const std::size_t k = op.support.size();
    const std::size_t bdim = static_cast<std::size_t>(1) << k;
    if (op.block.rows() != bdim || op.block.cols() != bdim)
        throw invalid_parameter("embed: block dimension does not match support");

    // bit i of a full index (site 0 = most significant) sits at shift N-1-i
    std::vector<std::size_t> shift(k);
    for (std::size_t i = 0; i < k; ++i) shift[i] = N - 1 - op.support[i];

    // enumerate complement configurations
    std::vector<std::size_t> rest_sites;
    {
        std::vector<bool> in(N, false);
        for (auto s : op.support) in[s] = true;
        for (std::size_t s = 0; s < N; ++s)
            if (!in[s]) rest_sites.push_back(N - 1 - s);
    }

    Matrix full(dim, dim);
    const std::size_t rest_count = static_cast<std::size_t>(1) << rest_sites.size();
    for (std::size_t r = 0; r < rest_count; ++r) {
        std::size_t base = 0;
        for (std::size_t b = 0; b < rest_sites.size(); ++b)
            if ((r >> b) & 1u) base |= static_cast<std::size_t>(1) << rest_sites[b];
        for (std::size_t p = 0; p < bdim; ++p) {
            std::size_t row = base;
            for (std::size_t i = 0; i < k; ++i)
                if ((p >> (k - 1 - i)) & 1u) row |= static_cast<std::size_t>(1) << shift[i];
            for (std::size_t q = 0; q < bdim; ++q) {
                const cplx v = op.block(p, q);
                if (v == cplx(0.0, 0.0)) continue;
                std::size_t col = base;
                for (std::size_t i = 0; i < k; ++i)
                    if ((q >> (k - 1 - i)) & 1u) col |= static_cast<std::size_t>(1) << shift[i];
                full(row, col) = v;
            }
        }
    }
    return full;
}

HamiltonianModel build_hamiltonian(const std::vector<Term>& terms, const Lattice& lat) {
    HamiltonianModel model;
    model.N = lat.N;
    model.terms = terms;
    int R = 0;
    double E = 0.0;
    for (const auto& t : terms) {
        if (t.anchor >= lat.N) throw invalid_parameter("build_hamiltonian: anchor out of range");
        const std::size_t bdim = static_cast<std::size_t>(1) << t.op.support.size();
        if (t.op.block.rows() != bdim || t.op.block.cols() != bdim)
            throw invalid_parameter("build_hamiltonian: inconsistent local dims");
        for (auto s : t.op.support) {
            if (s >= lat.N) throw invalid_parameter("build_hamiltonian: support out of range");
            R = std::max(R, lat.d(t.anchor, s));
        }
        E = std::max(E, spectral_norm(t.op.block));
    }
    model.R = R;
    model.E = E;
    return model;
}

Matrix dense_hamiltonian(const HamiltonianModel& model) {
    const std::size_t dim = static_cast<std::size_t>(1) << model.N;
    check_dim(dim);
    Matrix H(dim, dim);
    for (const auto& t : model.terms) H += embed(t.op, model.N);
    return H;
}

namespace {

// does the operator commute with X on qubit `site` (0 = most significant)?
bool commutes_with_x(const Matrix& A, std::size_t N, std::size_t site, double tol) {
    const std::size_t dim = A.rows();
    const std::size_t f = static_cast<std::size_t>(1) << (N - 1 - site);
    for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t b = 0; b < dim; ++b)
            if (std::abs(A(a, b ^ f) - A(a ^ f, b)) > tol) return false;
    return true;
}

bool commutes_with_z(const Matrix& A, std::size_t N, std::size_t site, double tol) {
    const std::size_t dim = A.rows();
    const std::size_t f = static_cast<std::size_t>(1) << (N - 1 - site);
    for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t b = 0; b < dim; ++b)
            if ((a & f) != (b & f) && std::abs(A(a, b)) > tol) return false;
    return true;
}

} // namespace

std::vector<std::size_t> exact_support(const Matrix& full, std::size_t N) {
    const double tol = 1e-12 * std::max(1e-300, full.max_abs());
    std::vector<std::size_t> sup;
    for (std::size_t s = 0; s < N; ++s)
        if (!commutes_with_x(full, N, s, tol) || !commutes_with_z(full, N, s, tol))
            sup.push_back(s);
    return sup;
}

LocalOperator reduce_to_support(const Matrix& full, std::size_t N,
                                const std::vector<std::size_t>& support) {
    const std::size_t k = support.size();
    const std::size_t bdim = static_cast<std::size_t>(1) << k;

    std::vector<std::size_t> shift(k);
    for (std::size_t i = 0; i < k; ++i) shift[i] = N - 1 - support[i];
    std::vector<std::size_t> rest_sites;
    {
        std::vector<bool> in(N, false);
        for (auto s : support) in[s] = true;
        for (std::size_t s = 0; s < N; ++s)
            if (!in[s]) rest_sites.push_back(N - 1 - s);
    }
    const std::size_t rest_count = static_cast<std::size_t>(1) << rest_sites.size();

    LocalOperator op;
    op.support = support;
    op.block = Matrix(bdim, bdim);
    for (std::size_t p = 0; p < bdim; ++p)
        for (std::size_t q = 0; q < bdim; ++q) {
            cplx acc = 0.0;
            for (std::size_t r = 0; r < rest_count; ++r) {
                std::size_t base = 0;
                for (std::size_t b = 0; b < rest_sites.size(); ++b)
                    if ((r >> b) & 1u) base |= static_cast<std::size_t>(1) << rest_sites[b];
                std::size_t row = base, col = base;
                for (std::size_t i = 0; i < k; ++i) {
                    if ((p >> (k - 1 - i)) & 1u) row |= static_cast<std::size_t>(1) << shift[i];
                    if ((q >> (k - 1 - i)) & 1u) col |= static_cast<std::size_t>(1) << shift[i];
                }
                acc += full(row, col);
            }
            op.block(p, q) = acc / static_cast<double>(rest_count);
        }
    return op;
}

LocalOperator nested_commutator(const LocalOperator& A, const LocalOperator& B, int n) {
    if (n < 0) throw invalid_parameter("nested_commutator: n must be >= 0");

    // union support defines the working space
    std::vector<std::size_t> sites = A.support;
    sites.insert(sites.end(), B.support.begin(), B.support.end());
    std::sort(sites.begin(), sites.end());
    sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
    const std::size_t k = sites.size();
    check_dim(static_cast<std::size_t>(1) << k);

    auto relabel = [&](const LocalOperator& op) {
        LocalOperator r = op;
        for (auto& s : r.support)
            s = static_cast<std::size_t>(std::lower_bound(sites.begin(), sites.end(), s) -
                                         sites.begin());
        return embed(r, k);
    };
    const Matrix Af = relabel(A);
    Matrix cur = relabel(B);
    for (int i = 0; i < n; ++i) cur = commutator(Af, cur);

    const auto local_sup = exact_support(cur, k);
    LocalOperator out = reduce_to_support(cur, k, local_sup);
    for (auto& s : out.support) s = sites[s];
    return out;
}

} // namespace qclt
