#include "abdyn/fixtures.hpp"

namespace abdyn::fixtures {

ExactMatrix last_row_shear(std::size_t n, std::size_t col, const Scalar& value) {
    ExactMatrix m = ExactMatrix::identity(n);
    m(n - 1, col) += value;
    return m;
}

GeneratorSet shear_3d() {
    return GeneratorSet::create(Field::Real, {last_row_shear(3, 0, Scalar(1)), last_row_shear(3, 1, Scalar(1))},
                                {"A", "B"});
}

GeneratorSet shear_4d() {
    return GeneratorSet::create(Field::Real, {last_row_shear(4, 0, Scalar(1)), last_row_shear(4, 1, Scalar(1))},
                                {"A", "B"});
}

GeneratorSet complex_shear_5d() {
    return GeneratorSet::create(Field::Complex,
                                {last_row_shear(5, 0, Scalar(1)), last_row_shear(5, 1, Scalar(1)),
                                 last_row_shear(5, 2, Scalar(1))},
                                {"A", "B", "C"});
}

GeneratorSet radical_shear_4d() {
    ExactMatrix a = last_row_shear(4, 0, parse_scalar("sqrt(2) - 1"));
    a(3, 1) = Scalar(1);
    return GeneratorSet::create(Field::Real, {a, last_row_shear(4, 0, Scalar(1))}, {"A", "B"});
}

GeneratorSet rotation_pi_3() {
    ExactMatrix r(2, 2);
    r(0, 0) = parse_scalar("1/2");
    r(0, 1) = parse_scalar("-sqrt(3)/2");
    r(1, 0) = parse_scalar("sqrt(3)/2");
    r(1, 1) = parse_scalar("1/2");
    return GeneratorSet::create(Field::Real, {r}, {"R"});
}

GeneratorSet dense_complex_line() {
    std::vector<ExactMatrix> gens;
    for (const char* s : {"3/5 + 4/5*i", "5/13 + 12/13*i", "3/2", "4/3"}) {
        ExactMatrix m(1, 1);
        m(0, 0) = parse_scalar(s);
        gens.push_back(m);
    }
    return GeneratorSet::create(Field::Complex, gens, {"R1", "R2", "S1", "S2"});
}

std::vector<Scalar> complex_shear_dense_point() {
    return {parse_scalar("1 + i"), parse_scalar("sqrt(3) + i*sqrt(2)"), parse_scalar("sqrt(2) + i"), Scalar(), Scalar()};
}

}  // namespace abdyn::fixtures
