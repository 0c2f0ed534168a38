#include "abdyn/kronecker.hpp"

#include "abdyn/errors.hpp"
#include "abdyn/linalg.hpp"

namespace abdyn {

namespace {

void validate(const LatticeSpec& spec) {
    if (spec.count() == 0) throw DomainError("a lattice needs at least one generator");
    const std::size_t d = spec.dimension();
    if (d == 0) throw DomainError("lattice generators must have positive length");
    for (const auto& v : spec.vectors) {
        if (v.size() != d) throw DimensionMismatch("lattice generators have different lengths");
        for (const auto& x : v)
            if (!x.is_real()) throw NonRealInput("lattice entries must be real, got " + x.to_string());
    }
}

// d x k matrix with the generators as columns.
ExactMatrix generator_matrix(const LatticeSpec& spec) {
    ExactMatrix a(spec.dimension(), spec.count());
    for (std::size_t j = 0; j < spec.count(); ++j)
        for (std::size_t i = 0; i < spec.dimension(); ++i) a(i, j) = spec.vectors[j][i];
    return a;
}

// Stacks the radical-coefficient rows of sum_j c_j x_j = 0 for each row x of `rows`.
// A zero row keeps the column count when every entry vanishes.
RationalMatrix rational_system(const std::vector<std::vector<Scalar>>& rows, std::size_t k) {
    RationalMatrix system;
    for (const auto& row : rows) {
        auto block = coefficient_matrix(row);
        for (auto& r : block) system.push_back(std::move(r));
    }
    system.emplace_back(k, mpq_class(0));
    return system;
}

std::vector<std::vector<mpz_class>> integer_basis(const RationalMatrix& system) {
    std::vector<std::vector<mpz_class>> out;
    for (const auto& v : rational_kernel(system)) out.push_back(primitive_integer_vector(v));
    return out;
}

}  // namespace

LatticeSpec lattice_spec(const std::vector<std::vector<std::string>>& rows) {
    LatticeSpec spec;
    for (const auto& row : rows) {
        std::vector<Scalar> v;
        for (const auto& e : row) v.push_back(parse_scalar(e));
        spec.vectors.push_back(std::move(v));
    }
    return spec;
}

std::vector<std::vector<mpz_class>> integer_relations(const LatticeSpec& spec) {
    validate(spec);
    const ExactMatrix a = generator_matrix(spec);
    std::vector<std::vector<Scalar>> rows(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) rows[i].push_back(a(i, j));
    return integer_basis(rational_system(rows, spec.count()));
}

std::optional<std::vector<mpz_class>> integer_relation(const LatticeSpec& spec) {
    auto all = integer_relations(spec);
    if (all.empty()) return std::nullopt;
    return all.front();
}

const char* to_string(LatticeClosure kind) {
    switch (kind) {
        case LatticeClosure::Closed: return "CLOSED";
        case LatticeClosure::Dense: return "DENSE";
        case LatticeClosure::DenseInProperSubgroup: return "DENSE_IN_PROPER_SUBGROUP";
    }
    return "?";
}

LatticeDecision dense_in(const LatticeSpec& spec) {
    validate(spec);
    const std::size_t d = spec.dimension();
    const std::size_t k = spec.count();
    if (d > 3) throw UnsupportedDimension("exact closure decisions are limited to d <= 3, got d = " + std::to_string(d));

    LatticeDecision out;
    out.relations = integer_relations(spec);
    const ExactMatrix a = generator_matrix(spec);
    out.real_rank = rank(a);

    // A rational t lies in the row space iff it is orthogonal to every null vector of A.
    const ExactMatrix null = kernel_basis(a);
    std::vector<std::vector<Scalar>> rows(null.cols());
    for (std::size_t c = 0; c < null.cols(); ++c)
        for (std::size_t i = 0; i < k; ++i) rows[c].push_back(null(i, c));
    out.certificate = rational_system(rows, k);
    out.certificate.pop_back();
    out.certificate_rank = out.certificate.empty() ? 0 : rational_rank(out.certificate);
    out.dual_relations = integer_basis(rational_system(rows, k));
    out.dual_rank = out.dual_relations.size();
    out.closure_dimension = out.real_rank - out.dual_rank;

    if (out.closure_dimension == 0)
        out.kind = LatticeClosure::Closed;
    else if (out.closure_dimension == d)
        out.kind = LatticeClosure::Dense;
    else
        out.kind = LatticeClosure::DenseInProperSubgroup;
    return out;
}

Scalar delta_determinant(const LatticeSpec& spec, const std::vector<long>& s) {
    validate(spec);
    const std::size_t d = spec.dimension();
    if (spec.count() != d + 1) throw DimensionMismatch("the determinant criterion needs d + 1 generators");
    if (s.size() != d + 1) throw DimensionMismatch("integer row must have d + 1 entries");
    ExactMatrix m(d + 1, d + 1);
    for (std::size_t j = 0; j <= d; ++j) {
        for (std::size_t i = 0; i < d; ++i) m(i, j) = spec.vectors[j][i];
        m(d, j) = Scalar(s[j]);
    }
    return determinant(m);
}

}  // namespace abdyn
