#include <doctest.h>

#include <cmath>

#include "lonetext/errors.hpp"
#include "lonetext/mathx.hpp"

using namespace lonetext;

TEST_SUITE("mathx") {

TEST_CASE("digamma matches high-precision reference values") {
    // Reference values computed with 30-digit arithmetic at the exact
    // binary-double inputs.
    struct Case {
        double x;
        double want;
    };
    const Case cases[] = {
        {0.0001, -10000.57705118351386},
        {0.01, -100.5608854578686724},
        {0.1, -10.42375494041107623},
        {0.5, -1.963510026021423479},
        {1.0, -0.5772156649015328606},
        {1.5, 0.03648997397857652056},
        {2.0, 0.4227843350984671394},
        {3.7, 1.167153539361511441},
        {6.0, 1.706117668431800473},
        {10.0, 2.251752589066721108},
        {123.456, 4.811829323828985412},
        {1e6, 13.81551005796419077},
    };
    for (const auto& c : cases) {
        CAPTURE(c.x);
        CHECK(std::fabs(digamma(c.x) - c.want) <= 1e-12 * std::fabs(c.want));
    }
    CHECK_THROWS_AS(digamma(0.0), ContractError);
    CHECK_THROWS_AS(digamma(-1.0), ContractError);
}

TEST_CASE("digamma recurrence psi(x+1) = psi(x) + 1/x") {
    for (double x : {0.001, 0.3, 1.7, 5.5, 42.0}) {
        CHECK(digamma(x + 1.0) == doctest::Approx(digamma(x) + 1.0 / x).epsilon(1e-12));
    }
}

TEST_CASE("incomplete beta endpoints and symmetry") {
    CHECK(incomplete_beta(2.0, 3.0, 0.0) == 0.0);
    CHECK(incomplete_beta(2.0, 3.0, 1.0) == 1.0);
    // I_x(a,b) = 1 - I_{1-x}(b,a)
    for (double x : {0.1, 0.4, 0.7}) {
        CHECK(incomplete_beta(2.5, 1.5, x) ==
              doctest::Approx(1.0 - incomplete_beta(1.5, 2.5, 1.0 - x)).epsilon(1e-12));
    }
    // I_x(1,1) = x
    CHECK(incomplete_beta(1.0, 1.0, 0.37) == doctest::Approx(0.37).epsilon(1e-12));
}

TEST_CASE("student t two-sided p at the table point") {
    CHECK(student_t_two_sided_p(2.262, 9.0) == doctest::Approx(0.050).epsilon(0.02));
    CHECK(std::fabs(student_t_two_sided_p(2.262, 9.0) - 0.05001284550245455) < 1e-9);
}

TEST_CASE("student t p(0) is exactly 1 for several dfs") {
    for (double df : {1.0, 5.0, 9.0, 30.0}) {
        CHECK(student_t_two_sided_p(0.0, df) == 1.0);
    }
}

TEST_CASE("student t p decreases monotonically in |t| and is sign symmetric") {
    double prev = 1.0;
    for (double t = 0.25; t < 6.0; t += 0.25) {
        double p = student_t_two_sided_p(t, 9.0);
        CHECK(p < prev);
        CHECK(p == student_t_two_sided_p(-t, 9.0));
        prev = p;
    }
}

TEST_CASE("student t critical value inverts the tail probability") {
    double t = student_t_critical(0.05, 9.0);
    CHECK(t == doctest::Approx(2.2621571628).epsilon(1e-8));
    CHECK(student_t_two_sided_p(t, 9.0) == doctest::Approx(0.05).epsilon(1e-9));
}

}  // TEST_SUITE
