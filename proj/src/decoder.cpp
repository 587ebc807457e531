#include "intstbc/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "intstbc/errors.hpp"
#include "zigzag.hpp"

namespace intstbc {

DetectionProblem make_detection_problem(const LinearDesign& design, const Constellation& constellation,
                                        const CMatrix& h, const CMatrix& y, double norm_scale)
{
    if (y.rows() != design.n || y.cols() != design.n) {
        throw std::invalid_argument("received matrix dimensions do not match design");
    }
    DetectionProblem p;
    p.effective = norm_scale * effective_channel(design, h);
    p.received = stack_real(y);
    p.alphabet = constellation.coordinate_alphabet();
    return p;
}

double residual_norm_sq(const DetectionProblem& p, std::span<const int> s)
{
    RVector r = p.received;
    for (Eigen::Index d = 0; d < p.effective.cols(); ++d) {
        const int v = s[static_cast<std::size_t>(d)];
        if (v != 0) {
            r.noalias() -= static_cast<double>(v) * p.effective.col(d);
        }
    }
    return r.squaredNorm();
}

std::vector<int> ml_decode_exhaustive(const DetectionProblem& p)
{
    const auto k = static_cast<std::size_t>(p.effective.cols());
    const auto width = p.alphabet.size();
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < k; ++i) {
        total *= width;
        if (total > kExhaustiveSearchCap) {
            throw BudgetExceeded("exhaustive ML search space exceeds 2^24 hypotheses");
        }
    }

    // Odometer with coordinate 0 most significant and the alphabet ascending,
    // so candidates arrive in lexicographic order and strict < keeps the
    // smallest among ties.
    std::vector<std::size_t> idx(k, 0);
    std::vector<int> s(k, p.alphabet.front());
    std::vector<int> best = s;
    double best_metric = std::numeric_limits<double>::infinity();
    for (std::uint64_t it = 0; it < total; ++it) {
        const double metric = residual_norm_sq(p, s);
        if (metric < best_metric) {
            best_metric = metric;
            best = s;
        }
        for (std::size_t d = k; d-- > 0;) {
            if (++idx[d] < width) {
                s[d] = p.alphabet[idx[d]];
                break;
            }
            idx[d] = 0;
            s[d] = p.alphabet[0];
        }
    }
    return best;
}

namespace {

bool lexicographically_less(const std::vector<int>& a, const std::vector<int>& b)
{
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

struct Triangular {
    RMatrix r;
    RVector z;
    /// ||received||^2 - ||z||^2, so residual = offset + ||z - R t||^2.
    double offset = 0.0;
    Eigen::VectorXi perm;
    bool regularized = false;
};

Triangular triangularize(const DetectionProblem& p)
{
    const auto k = p.effective.cols();
    Eigen::ColPivHouseholderQR<RMatrix> qr(p.effective);
    Triangular t;
    t.perm = qr.colsPermutation().indices();

    if (qr.rank() == k) {
        t.r = qr.matrixR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
        const RVector qty = qr.householderQ().transpose() * p.received;
        t.z = qty.head(k);
    }
    else {
        const RMatrix gp = p.effective * qr.colsPermutation();
        RMatrix gram = gp.transpose() * gp;
        gram.diagonal().array() += 1e-12;
        Eigen::LLT<RMatrix> llt(gram);
        if (llt.info() != Eigen::Success) {
            throw std::runtime_error("effective channel is rank deficient beyond regularization");
        }
        t.r = llt.matrixU();
        t.z = llt.matrixL().solve(gp.transpose() * p.received);
        t.regularized = true;
    }
    t.offset = p.received.squaredNorm() - t.z.squaredNorm();
    return t;
}

class SphereSearch {
public:
    SphereSearch(const DetectionProblem& p, const Triangular& tri, double radius_sq)
        : p_(p), tri_(tri), k_(static_cast<int>(p.effective.cols())),
          t_(static_cast<std::size_t>(k_), 0), s_(static_cast<std::size_t>(k_), 0), best_res_(radius_sq),
          lo_(p.alphabet.front()), hi_(p.alphabet.back())
    {
    }

    void run() { visit(k_ - 1, 0.0); }

    bool found() const { return found_; }
    const std::vector<int>& best() const { return best_; }
    std::uint64_t nodes() const { return nodes_; }

private:
    double bound() const
    {
        const double b = best_res_ - tri_.offset;
        return b + 1e-9 * std::abs(best_res_) + 1e-12;
    }

    void visit(int level, double partial)
    {
        const auto& r = tri_.r;
        double rest = tri_.z(level);
        for (int j = level + 1; j < k_; ++j) {
            rest -= r(level, j) * t_[static_cast<std::size_t>(j)];
        }
        const double diag = r(level, level);
        detail::Zigzag zz(rest / diag, lo_, hi_, 2);
        int v = 0;
        while (zz.next(v)) {
            const double e = rest - diag * v;
            const double next = partial + e * e;
            if (next > bound()) {
                break;
            }
            ++nodes_;
            t_[static_cast<std::size_t>(level)] = v;
            s_[static_cast<std::size_t>(tri_.perm(level))] = v;
            if (level == 0) {
                leaf();
            }
            else {
                visit(level - 1, next);
            }
        }
    }

    void leaf()
    {
        const double res = residual_norm_sq(p_, s_);
        if (!found_ ? res <= best_res_ : (res < best_res_ || (res == best_res_ && lexicographically_less(s_, best_)))) {
            best_res_ = res;
            best_ = s_;
            found_ = true;
        }
    }

    const DetectionProblem& p_;
    const Triangular& tri_;
    int k_;
    std::vector<int> t_;
    std::vector<int> s_;
    std::vector<int> best_;
    double best_res_;
    int lo_;
    int hi_;
    bool found_ = false;
    std::uint64_t nodes_ = 0;
};

}  // namespace

SphereResult sphere_decode(const DetectionProblem& p, double initial_radius)
{
    if (p.effective.cols() == 0 || p.alphabet.empty()) {
        throw std::invalid_argument("empty detection problem");
    }
    if (p.effective.rows() != p.received.size()) {
        throw std::invalid_argument("received vector length does not match effective matrix");
    }
    const Triangular tri = triangularize(p);

    const double radius_sq = std::isfinite(initial_radius) ? initial_radius * initial_radius
                                                           : std::numeric_limits<double>::infinity();
    SphereSearch search(p, tri, radius_sq);
    search.run();
    SphereResult out;
    out.visited_nodes = search.nodes();
    out.regularized = tri.regularized;
    if (!search.found()) {
        SphereSearch open(p, tri, std::numeric_limits<double>::infinity());
        open.run();
        out.visited_nodes += open.nodes();
        out.coords = open.best();
        return out;
    }
    out.coords = search.best();
    return out;
}

}  // namespace intstbc
