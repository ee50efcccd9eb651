"""Fixed-vertex projectors: canonicalization, both variants, oracle checks."""

import math

import numpy as np
import pytest

from _oracles import best_feasible_cost_one_fixed
from triproject import (
    ProjectionSpec,
    canonicalize,
    generate_case2,
    ottpao_one_fixed,
    project_two_fixed,
    signed_area,
    solve_case1_one_fixed,
    solve_case2_one_fixed,
)
from triproject.project_fixed import project_one_fixed
from triproject.trigeom import displacement_cost

RIGHT_ISOSCELES = (1.0, 0.0, 0.0, 1.0, 0.0, 0.0)  # right angle at the fixed vertex


def random_inputs(n, seed, scale=2.0):
    rng = np.random.default_rng(seed)
    for _ in range(n):
        tri = tuple(rng.normal(0.0, scale, 6))
        ao = float(rng.uniform(0.05, 3.0))
        s = 1 if rng.random() < 0.5 else -1
        yield tri, ao, s


class TestCanonicalize:
    def test_no_flags_identity(self):
        tri = (1.0, 2.0, 3.0, 4.0, 5.0, 6.0)
        canon, pattern = canonicalize(tri, (False, False, False))
        assert canon == tri
        assert pattern.kind == "none"
        assert pattern.restore(canon) == tri

    def test_first_vertex_fixed_rotates_to_last_slot(self):
        tri = (1.0, 2.0, 3.0, 4.0, 5.0, 6.0)
        canon, pattern = canonicalize(tri, (True, False, False))
        assert pattern.kind == "one"
        assert canon == (3.0, 4.0, 5.0, 6.0, 1.0, 2.0)
        assert pattern.restore(canon) == tri

    def test_two_fixed_roundtrip_bit_exact(self):
        tri = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6)
        canon, pattern = canonicalize(tri, (True, True, False))
        assert pattern.kind == "two"
        # the free vertex lands in the first slot, fixed pair in the last two
        assert canon == (0.5, 0.6, 0.1, 0.2, 0.3, 0.4)
        assert pattern.restore(canon) == tri

    def test_cyclic_permutations_preserve_signed_area(self):
        for tri, _, _ in random_inputs(100, seed=20):
            for flags in ((True, False, False), (False, True, False), (False, False, True),
                          (True, True, False), (True, False, True), (False, True, True)):
                canon, _ = canonicalize(tri, flags)
                assert signed_area(canon) == pytest.approx(signed_area(tri), rel=1e-12, abs=1e-15)

    def test_rejects_fully_pinned(self):
        with pytest.raises(ValueError):
            canonicalize((0.0,) * 6, (True, True, True))


class TestCase1OneFixed:
    def test_feasible_input_identity(self):
        tri = (1.0, 0.0, 0.0, 1.0, 0.0, 0.0)  # area 0.5
        out = solve_case1_one_fixed(tri, ProjectionSpec(0.5, 1))
        best = min(out.solutions, key=lambda c: c.cost)
        assert best.cost == pytest.approx(0.0, abs=1e-20)
        assert best.triangle == pytest.approx(tri, abs=1e-12)

    def test_right_isosceles_root_structure(self):
        # shrinking with preserved orientation: roots {-4-2*sqrt(2/Ao), -4+2*sqrt(2/Ao), 4, 4}
        ao = 0.125
        out = solve_case1_one_fixed(RIGHT_ISOSCELES, ProjectionSpec(ao, 1))
        got = sorted(c.multiplier for c in list(out.solutions) + list(out.rejected))
        branch = 2.0 * math.sqrt(2.0 / ao)
        want = sorted([-4.0 - branch, -4.0 + branch, 4.0, 4.0])
        assert got == pytest.approx(want, abs=1e-6)

    def test_candidates_pass_shoelace_recheck(self):
        for tri, ao, s in random_inputs(500, seed=21):
            out = solve_case1_one_fixed(tri, ProjectionSpec(ao, s))
            for c in out.solutions:
                assert abs(s * signed_area(c.triangle) - ao) <= 1e-3
                assert c.triangle[4:] == tri[4:]


class TestCase2OneFixed:
    def test_quarter_area_right_isosceles(self):
        sol = solve_case2_one_fixed(RIGHT_ISOSCELES, ProjectionSpec(0.125, 1))
        assert sol.scale == 0.0
        assert sol.triangle == pytest.approx((0.5, 0.0, 0.0, 0.5, 0.0, 0.0), abs=1e-15)
        assert sol.signed_area == pytest.approx(0.125, rel=1e-12)
        assert sol.cost == pytest.approx(0.5, rel=1e-12)

    def test_colocated_input(self):
        px, py, ao = 2.0, 5.0, 0.3
        sol = solve_case2_one_fixed((px, py, px, py, px, py), ProjectionSpec(ao, 1))
        assert sol.branch == -1
        assert sol.scale == pytest.approx(math.sqrt(2.0 * ao), rel=1e-12)
        assert sol.signed_area == pytest.approx(ao, rel=1e-12)
        assert sol.triangle[4:] == (px, py)
        # right isosceles with the right angle at the fixed point
        v = sol.triangle
        d1 = math.hypot(v[0] - px, v[1] - py)
        d2 = math.hypot(v[2] - px, v[3] - py)
        assert d1 == pytest.approx(d2, rel=1e-9)

    def test_colocated_family_constant_cost(self):
        tri = (1.0, -2.0, 1.0, -2.0, 1.0, -2.0)
        sol = solve_case2_one_fixed(tri, ProjectionSpec(0.4, 1))
        costs = [displacement_cost(generate_case2(sol, float(k)), tri) for k in range(7)]
        assert max(costs) - min(costs) <= 1e-9

    def test_orientation_inverted_right_isosceles_feasible(self):
        sol = solve_case2_one_fixed(RIGHT_ISOSCELES, ProjectionSpec(0.7, -1))
        assert sol.feasible
        assert sol.signed_area == pytest.approx(-0.7, rel=1e-9)


class TestOttpaoOneFixed:
    def test_feasible_input_identity(self):
        tri = (1.0, 0.0, 0.0, 1.0, 0.0, 0.0)
        out = ottpao_one_fixed(tri, ProjectionSpec(0.5, 1))
        assert out.cost == pytest.approx(0.0, abs=1e-18)

    def test_orientation_inversion_routes_to_degenerate_branch(self):
        out = ottpao_one_fixed(RIGHT_ISOSCELES, ProjectionSpec(0.5, -1))
        assert out.chosen_case == "II"
        assert out.signed_area == pytest.approx(-0.5, rel=1e-9)

    def test_fixed_vertex_bit_identical(self):
        for tri, ao, s in random_inputs(2000, seed=22):
            out = ottpao_one_fixed(tri, ProjectionSpec(ao, s))
            assert out.optimal[4] == tri[4] and out.optimal[5] == tri[5]
            assert abs(s * signed_area(out.optimal) - ao) <= 1e-3

    def test_shrinking_right_isosceles_ordering(self):
        # preserved orientation with a small target: the degenerate branch is
        # no worse than every regular candidate
        for ao in (0.125, 0.08, 0.02):
            spec = ProjectionSpec(ao, 1)
            case1 = solve_case1_one_fixed(RIGHT_ISOSCELES, spec)
            case2 = solve_case2_one_fixed(RIGHT_ISOSCELES, spec)
            assert case2.feasible
            for c in case1.solutions:
                assert case2.cost <= c.cost + 1e-9

    def test_optimality_against_constrained_oracle(self):
        for i, (tri, ao, s) in enumerate(random_inputs(150, seed=23)):
            ours = ottpao_one_fixed(tri, ProjectionSpec(ao, s)).cost
            oracle = best_feasible_cost_one_fixed(tri, ao, s, np.random.default_rng(8000 + i))
            assert ours <= oracle + 1e-6

    def test_lean_path_matches_full_outcome(self):
        for tri, ao, s in random_inputs(1000, seed=24):
            assert (
                project_one_fixed(tri, ao, s, 1e-3)
                == ottpao_one_fixed(tri, ProjectionSpec(ao, s)).optimal
            )


class TestProjectTwoFixed:
    def test_feasible_input_unchanged(self):
        tri = (0.0, 1.0, 0.0, 0.0, 1.0, 0.0)  # area +0.5 with b,c fixed
        out = project_two_fixed(tri, ProjectionSpec(0.5, 1))
        assert out == tri

    def test_halving_example(self):
        tri = (0.5, 1.0, 0.0, 0.0, 1.0, 0.0)  # area 0.5
        out = project_two_fixed(tri, ProjectionSpec(0.25, 1))
        assert out == pytest.approx((0.5, 0.5, 0.0, 0.0, 1.0, 0.0), abs=1e-15)
        assert signed_area(out) == pytest.approx(0.25, abs=1e-16)

    def test_coincident_fixed_pair_is_noop(self):
        tri = (0.3, 0.7, 2.0, 2.0, 2.0, 2.0)
        out = project_two_fixed(tri, ProjectionSpec(1.0, 1))
        assert out == tri

    def test_exact_feasibility_and_gradient_direction(self):
        for tri, ao, s in random_inputs(2000, seed=25):
            if (tri[2] - tri[4]) ** 2 + (tri[3] - tri[5]) ** 2 <= 1e-3:
                continue
            out = project_two_fixed(tri, ProjectionSpec(ao, s))
            assert out[2:] == tri[2:]
            # shoelace roundoff scales with coordinate products
            scale = max(1.0, ao, max(abs(v) for v in out) ** 2)
            assert abs(s * signed_area(out) - ao) <= 10 * 2.3e-16 * scale
            # displacement parallel to the constraint gradient
            dx, dy = out[0] - tri[0], out[1] - tri[1]
            gx, gy = tri[3] - tri[5], tri[4] - tri[2]
            cross = dx * gy - dy * gx
            assert abs(cross) <= 1e-10 * max(1.0, math.hypot(dx, dy) * math.hypot(gx, gy))

    def test_beats_any_other_point_on_the_constraint_line(self):
        # affine constraint: closed form must be the orthogonal projection
        rng = np.random.default_rng(26)
        for tri, ao, s in random_inputs(200, seed=27):
            if (tri[2] - tri[4]) ** 2 + (tri[3] - tri[5]) ** 2 <= 1e-3:
                continue
            out = project_two_fixed(tri, ProjectionSpec(ao, s))
            best = displacement_cost(out, tri)
            # the constraint is affine in the moving vertex; sliding along the
            # fixed edge direction stays on the constraint line
            ex, ey = tri[2] - tri[4], tri[3] - tri[5]
            for _ in range(20):
                t = rng.normal(0, 1.0)
                probe = (out[0] + t * ex, out[1] + t * ey) + tri[2:]
                assert abs(s * signed_area(probe) - ao) < 1e-9 * max(1.0, ao, abs(t))
                assert best <= displacement_cost(probe, tri) + 1e-12
