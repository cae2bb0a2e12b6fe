#include <doctest.h>

#include "pid/lp.hpp"

using namespace pid;
using pid::lp::Constraint;
using pid::lp::Rel;

TEST_CASE("simplex solves small textbook programs") {
    SUBCASE("max 3x+5y style (as min of the negation)") {
        // min -3x - 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18
        std::vector<Constraint> cons = {
            {{1.0, 0.0}, Rel::Le, 4.0},
            {{0.0, 2.0}, Rel::Le, 12.0},
            {{3.0, 2.0}, Rel::Le, 18.0},
        };
        auto sol = lp::solve_min({-3.0, -5.0}, cons);
        CHECK(sol.objective == doctest::Approx(-36.0));
        CHECK(sol.x[0] == doctest::Approx(2.0));
        CHECK(sol.x[1] == doctest::Approx(6.0));
    }
    SUBCASE("equality and >= constraints") {
        // min x + 2y s.t. x + y = 1, x >= 0.25
        std::vector<Constraint> cons = {
            {{1.0, 1.0}, Rel::Eq, 1.0},
            {{1.0, 0.0}, Rel::Ge, 0.25},
        };
        auto sol = lp::solve_min({1.0, 2.0}, cons);
        CHECK(sol.objective == doctest::Approx(1.0));  // x = 1, y = 0
        CHECK(sol.x[0] == doctest::Approx(1.0));
    }
    SUBCASE("infeasible program throws") {
        std::vector<Constraint> cons = {
            {{1.0}, Rel::Ge, 2.0},
            {{1.0}, Rel::Le, 1.0},
        };
        CHECK_THROWS_AS(lp::solve_min({1.0}, cons), LpFailure);
    }
    SUBCASE("degenerate vertices do not cycle") {
        // A classic degenerate instance.
        std::vector<Constraint> cons = {
            {{0.5, -5.5, -2.5, 9.0}, Rel::Le, 0.0},
            {{0.5, -1.5, -0.5, 1.0}, Rel::Le, 0.0},
            {{1.0, 0.0, 0.0, 0.0}, Rel::Le, 1.0},
        };
        auto sol = lp::solve_min({-10.0, 57.0, 9.0, 24.0}, cons);
        CHECK(sol.objective == doctest::Approx(-1.0));
    }
}
