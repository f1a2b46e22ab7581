#include "qclt/lattice.hpp"

#include "qclt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

namespace qclt {

std::string Lattice::kind_name() const {
    switch (kind) {
        case LatticeKind::chain: return "chain";
        case LatticeKind::ring: return "ring";
        case LatticeKind::grid: return "grid";
        case LatticeKind::custom: return "custom";
    }
    return "custom";
}

std::string Lattice::to_json() const {
    std::ostringstream os;
    os << "{\"kind\":\"" << kind_name() << "\",\"extents\":[";
    for (std::size_t i = 0; i < extents.size(); ++i) {
        if (i) os << ",";
        os << extents[i];
    }
    os << "],\"wrap\":" << (wrap ? "true" : "false") << ",\"N\":" << N << "}";
    return os.str();
}

namespace {

// axis distance with optional wraparound
int axis_dist(long a, long b, long L, bool wrap) {
    long d = std::labs(a - b);
    if (wrap) d = std::min(d, L - d);
    return static_cast<int>(d);
}

} // namespace

Lattice build_lattice(LatticeKind kind, const std::vector<std::size_t>& extents, bool wrap) {
    if (extents.empty()) throw invalid_parameter("build_lattice: extents empty");
    for (auto e : extents)
        if (e == 0) throw invalid_parameter("build_lattice: zero extent");

    Lattice lat;
    lat.kind = kind;
    lat.wrap = wrap || kind == LatticeKind::ring;

    std::vector<std::size_t> ext = extents;
    if (kind == LatticeKind::chain || kind == LatticeKind::ring) {
        if (extents.size() != 1)
            throw invalid_parameter("build_lattice: chain/ring take a single extent");
        if (kind == LatticeKind::ring) lat.wrap = true;
        else lat.wrap = wrap;
    } else if (kind == LatticeKind::custom) {
        throw invalid_parameter("build_lattice: use custom_lattice for explicit metrics");
    }
    lat.extents = ext;

    std::size_t N = 1;
    for (auto e : ext) N *= e;
    lat.N = N;
    lat.metric.assign(N * N, 0);

    const std::size_t axes = ext.size();
    std::vector<long> ci(axes), cj(axes);
    for (std::size_t i = 0; i < N; ++i) {
        std::size_t t = i;
        for (std::size_t a = 0; a < axes; ++a) {
            ci[a] = static_cast<long>(t % ext[a]);
            t /= ext[a];
        }
        for (std::size_t j = 0; j < N; ++j) {
            t = j;
            for (std::size_t a = 0; a < axes; ++a) {
                cj[a] = static_cast<long>(t % ext[a]);
                t /= ext[a];
            }
            int d = 0;
            for (std::size_t a = 0; a < axes; ++a)
                d += axis_dist(ci[a], cj[a], static_cast<long>(ext[a]), lat.wrap);
            lat.metric[i * N + j] = d;
        }
    }
    return lat;
}

Lattice custom_lattice(std::size_t N, const std::vector<int>& metric) {
    if (N == 0) throw invalid_parameter("custom_lattice: N must be >= 1");
    if (metric.size() != N * N) throw invalid_parameter("custom_lattice: metric size mismatch");
    for (std::size_t i = 0; i < N; ++i) {
        if (metric[i * N + i] != 0) throw invalid_parameter("custom_lattice: nonzero diagonal");
        for (std::size_t j = 0; j < N; ++j) {
            if (metric[i * N + j] < 0) throw invalid_parameter("custom_lattice: negative distance");
            if (metric[i * N + j] != metric[j * N + i])
                throw invalid_parameter("custom_lattice: metric not symmetric");
        }
    }
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j)
            for (std::size_t k = 0; k < N; ++k)
                if (metric[i * N + j] > metric[i * N + k] + metric[k * N + j])
                    throw invalid_parameter("custom_lattice: triangle inequality violated");

    Lattice lat;
    lat.kind = LatticeKind::custom;
    lat.extents = {N};
    lat.N = N;
    lat.metric = metric;
    return lat;
}

DimensionCertificate dimension_certificate(const Lattice& lat) {
    const std::size_t N = lat.N;
    int max_d = 0;
    for (int d : lat.metric) max_d = std::max(max_d, d);

    std::vector<std::size_t> max_counts(static_cast<std::size_t>(max_d), 0);
    std::vector<std::size_t> counts;
    for (std::size_t j = 0; j < N; ++j) {
        counts.assign(static_cast<std::size_t>(max_d), 0);
        for (std::size_t i = 0; i < N; ++i) {
            const int d = lat.d(i, j);
            if (d >= 1) counts[static_cast<std::size_t>(d) - 1]++;
        }
        for (std::size_t l = 0; l < counts.size(); ++l)
            max_counts[l] = std::max(max_counts[l], counts[l]);
    }

    DimensionCertificate cert;
    cert.max_shell_counts = max_counts;

    if (lat.kind == LatticeKind::chain || lat.kind == LatticeKind::ring) {
        cert.D = 1;
    } else if (lat.kind == LatticeKind::grid) {
        cert.D = static_cast<int>(lat.extents.size());
    } else {
        // A finite lattice admits any D with a large enough c_D, so "smallest"
        // needs a convention: take the smallest D whose ratio profile
        // count(l)/l^{D-1} is maximized at l=1 (shells stop growing in the
        // normalized sense), capped at 3.
        cert.D = 3;
        for (int D = 1; D <= 3; ++D) {
            bool peak_at_one = true;
            if (!max_counts.empty()) {
                const double first = static_cast<double>(max_counts[0]);
                for (std::size_t l = 1; l < max_counts.size(); ++l) {
                    const double ratio = static_cast<double>(max_counts[l]) /
                                         std::pow(static_cast<double>(l + 1), D - 1);
                    if (ratio > first + 1e-12) peak_at_one = false;
                }
            }
            if (peak_at_one) {
                cert.D = D;
                break;
            }
        }
    }

    double c = 0.0;
    for (std::size_t l = 0; l < max_counts.size(); ++l)
        c = std::max(c, static_cast<double>(max_counts[l]) /
                            std::pow(static_cast<double>(l + 1), cert.D - 1));
    cert.c_D = c;
    return cert;
}

int set_distance(const Lattice& lat, const std::vector<std::size_t>& A,
                 const std::vector<std::size_t>& B) {
    if (A.empty() || B.empty()) throw invalid_parameter("set_distance: empty site set");
    int best = std::numeric_limits<int>::max();
    for (auto a : A)
        for (auto b : B) best = std::min(best, lat.d(a, b));
    return best;
}

} // namespace qclt
