import itertools
import numpy as np
from math import gcd
from sympy import Matrix
from fractions import Fraction
from django.test import SimpleTestCase
from Algebra.modules import MixedModule
from Algebra.matrices import IntMatrix, smith_normal_form
from Algebra.exceptions import ChainComplexError, PreconditionError, StructuralError
from Algebra.mixed import MixedSpace, MixedMap, MixedComplex, MixedSubgroup
from Algebra.elimination import RationalEchelon, IntegerEchelon, egcd, axpy, denominator_lcm
from Algebra.cohomology import (
    kernel, solve_mixed, NoSolution, cohomology_at, is_coboundary, Witness, Certificate,
)




def random_map(rng, source, target, density=0.5, bound=2):
    columns = {}
    for j in range(source.dim):
        column = {}
        for i in range(target.dim):
            if i < target.nZ and j >= source.nZ:
                continue
            if rng.random() > density:
                continue
            numerator = int(rng.integers(-bound, bound + 1))
            denominator = 1 if i < target.nZ else int(rng.integers(1, 4))
            if numerator:
                column[i] = Fraction(numerator, denominator)
        columns[j] = column
    return MixedMap(source, target, columns)


def random_automorphism(rng, space, steps=6):

    # Products of elementary moves (integral shears on Z, rational shears Z→Q and Q→Q,
    # rescaling of Q), returned together with the inverse.

    total, inverse = MixedMap.identity(space), MixedMap.identity(space)
    for _ in range(steps):
        move = {j: space.unit(j) for j in range(space.dim)}
        back = {j: space.unit(j) for j in range(space.dim)}
        kind = rng.integers(0, 3)
        if kind == 0 and space.nZ >= 2:
            i, j = (int(x) for x in rng.choice(space.nZ, 2, replace=False))
            c = int(rng.integers(-2, 3))
            move[j], back[j] = {j: 1, i: c}, {j: 1, i: -c}
        elif kind == 1 and space.nZ and space.nQ:
            j = int(rng.integers(0, space.nZ))
            i = int(rng.integers(space.nZ, space.dim))
            c = Fraction(int(rng.integers(-3, 4)), 2)
            move[j], back[j] = {j: 1, i: c}, {j: 1, i: -c}
        elif space.nQ:
            i = int(rng.integers(space.nZ, space.dim))
            c = Fraction(int(rng.choice([1, 2, 3, -1])), int(rng.integers(1, 4)))
            move[i], back[i] = {i: c}, {i: 1 / c}
        total = MixedMap(space, space, move) @ total
        inverse = inverse @ MixedMap(space, space, back)
    return total, inverse


def random_complex(rng, dims):

    # Three terms; d0 lands in ker d1 so d∘d = 0 by construction.

    spaces = [MixedSpace(*d) for d in dims]
    d1 = random_map(rng, spaces[1], spaces[2])
    cycles = kernel(d1)
    columns = {}
    for j in range(spaces[0].dim):
        column = {}
        if j < spaces[0].nZ:
            for g in cycles.z_gens:
                axpy(column, int(rng.integers(-2, 3)), g)
        for g in cycles.q_gens:
            axpy(column, Fraction(int(rng.integers(-2, 3)), int(rng.integers(1, 3))), g)
        columns[j] = column
    d0 = MixedMap(spaces[0], spaces[1], columns)
    return MixedComplex({0: spaces[0], 1: spaces[1], 2: spaces[2]}, {0: d0, 1: d1})


def transformed(rng, complex_):
    autos = {n: random_automorphism(rng, complex_.space(n)) for n in complex_.spaces}
    differentials = {n: autos[n + 1][0] @ d @ autos[n][1] for n, d in complex_.differentials.items()}
    return MixedComplex(complex_.spaces, differentials)


def two_term(nZ0, nQ0, nZ1, nQ1, A=None, C=None, D=None):
    source, target = MixedSpace(nZ0, nQ0), MixedSpace(nZ1, nQ1)
    d = MixedMap.from_blocks(source, target, A, C, D)
    return MixedComplex({0: source, 1: target}, {0: d})




class EchelonTests(SimpleTestCase):

    def test_egcd_signs(self):
        for a, b in [(12, 18), (-12, 18), (7, -3), (0, -5), (-4, 0)]:
            g, s, t = egcd(a, b)
            self.assertEqual(g, gcd(a, b))
            self.assertEqual(s * a + t * b, g)

    def test_denominator_lcm(self):
        self.assertEqual(denominator_lcm([{0: Fraction(1, 4), 2: Fraction(5, 6)}, {1: 3}]), 12)
        self.assertEqual(denominator_lcm([{0: 2}]), 1)
        self.assertEqual(denominator_lcm([]), 1)

    def test_rational_relations_span_kernel(self):
        echelon = RationalEchelon(track=True)
        echelon.extend([{0: 1, 1: 2}, {0: 2, 1: 4}, {1: 1}, {0: 3}])
        self.assertEqual(echelon.rank, 2)
        self.assertEqual(len(echelon.relations), 2)
        vectors = [{0: 1, 1: 2}, {0: 2, 1: 4}, {1: 1}, {0: 3}]
        for relation in echelon.relations:
            total = {}
            for tag, c in relation.items():
                axpy(total, c, vectors[tag])
            self.assertEqual(total, {})

    def test_integer_echelon_membership(self):
        lattice = IntegerEchelon(track=True).extend([{0: 4, 1: 2}, {0: 6, 1: 3}])
        self.assertTrue(lattice.contains({0: 2, 1: 1}))
        self.assertFalse(lattice.contains({0: 1}))
        combo = lattice.express({0: 2, 1: 1})
        total = {}
        for tag, c in combo.items():
            axpy(total, c, [{0: 4, 1: 2}, {0: 6, 1: 3}][tag])
        self.assertEqual(total, {0: 2, 1: 1})

    def test_strategies_give_same_lattice(self):
        vectors = [{0: 3, 2: 5}, {1: 4, 2: 2}, {0: 1, 1: 1, 2: 1}]
        for strategy in ('row', 'column'):
            lattice = IntegerEchelon(strategy).extend(vectors)
            self.assertEqual(lattice.rank, 3)
            for v in vectors:
                self.assertTrue(lattice.contains(v))




class SmithNormalFormTests(SimpleTestCase):

    def assertSmith(self, A):
        A = IntMatrix(A)
        U, S, V = smith_normal_form(A)
        self.assertEqual(U @ A @ V, S)
        self.assertTrue(U.is_unimodular())
        self.assertTrue(V.is_unimodular())
        self.assertTrue(S.is_diagonal())
        diagonal = S.diagonal()
        self.assertTrue(all(d >= 0 for d in diagonal))
        nonzero = [d for d in diagonal if d]
        self.assertEqual(diagonal[:len(nonzero)], nonzero)
        for a, b in zip(nonzero, nonzero[1:]):
            self.assertEqual(b % a, 0)
        return S

    def test_identity(self):
        S = self.assertSmith(IntMatrix.identity(3))
        self.assertEqual(S, IntMatrix.identity(3))

    def test_small_example(self):
        S = self.assertSmith([[2, 4], [6, 8]])
        self.assertEqual(S.diagonal(), [2, 4])

    def test_zero_matrix(self):
        S = self.assertSmith(IntMatrix.zeros(2, 3))
        self.assertEqual(S, IntMatrix.zeros(2, 3))

    def test_inverse_tracking(self):
        A = IntMatrix([[4, 6, 2], [2, 0, 8]])
        U, S, V, U_inv = smith_normal_form(A, with_inverse=True)
        self.assertEqual(U @ U_inv, IntMatrix.identity(2))

    def test_random_against_determinantal_divisors(self):
        rng = np.random.default_rng(7)
        for _ in range(25):
            m, n = int(rng.integers(1, 4)), int(rng.integers(1, 4))
            A = rng.integers(-6, 7, size=(m, n)).tolist()
            S = self.assertSmith(A)
            nonzero = [d for d in S.diagonal() if d]
            product = 1
            for k, d in enumerate(nonzero, start=1):
                product *= d
                minors = [
                    int(Matrix([[A[i][j] for j in cols] for i in rows]).det())
                    for rows in itertools.combinations(range(m), k)
                    for cols in itertools.combinations(range(n), k)
                ]
                divisor = 0
                for minor in minors:
                    divisor = gcd(divisor, minor)
                self.assertEqual(product, divisor)
            self.assertEqual(len(nonzero), Matrix(A).rank())




class MixedMapTests(SimpleTestCase):

    def test_q_to_z_block_rejected(self):
        with self.assertRaises(StructuralError):
            MixedMap(MixedSpace(0, 1), MixedSpace(1, 0), {0: {0: 1}})

    def test_non_integral_z_block_rejected(self):
        with self.assertRaises(StructuralError):
            MixedMap(MixedSpace(1, 0), MixedSpace(1, 0), {0: {0: Fraction(1, 2)}})

    def test_composition(self):
        f = MixedMap.from_blocks(MixedSpace(1, 1), MixedSpace(1, 1), A=[[2]], C=[[1]], D=[[Fraction(1, 2)]])
        g = f @ f
        A, C, D = g.blocks()
        self.assertEqual(A, [[4]])
        self.assertEqual(C, [[Fraction(5, 2)]])
        self.assertEqual(D, [[Fraction(1, 4)]])

    def test_complex_checks_d_squared(self):
        Z = MixedSpace(1, 0)
        d = MixedMap.identity(Z)
        with self.assertRaises(ChainComplexError):
            MixedComplex({0: Z, 1: Z, 2: Z}, {0: d, 1: d})




class SolveMixedTests(SimpleTestCase):

    def test_times_two(self):
        f = MixedMap.from_blocks(MixedSpace(1, 0), MixedSpace(1, 0), A=[[2]])
        self.assertEqual(solve_mixed(f, {0: 4}), {0: 2})
        failure = solve_mixed(f, {0: 3})
        self.assertIsInstance(failure, NoSolution)
        self.assertTrue(failure.verify(f, {0: 3}))

    def test_unit_inclusion(self):
        f = MixedMap.from_blocks(MixedSpace(1, 0), MixedSpace(0, 1), C=[[1]])
        failure = solve_mixed(f, {0: Fraction(1, 2)})
        self.assertIsInstance(failure, NoSolution)
        self.assertEqual(failure.functional, {0: 1})
        self.assertEqual(failure.value, Fraction(1, 2))
        self.assertTrue(failure.verify(f, {0: Fraction(1, 2)}))

    def test_rank_obstruction(self):
        f = MixedMap.from_blocks(MixedSpace(1, 0), MixedSpace(1, 1), A=[[1]])
        failure = solve_mixed(f, {1: Fraction(1)})
        self.assertEqual(failure.reason, 'rank')
        self.assertTrue(failure.verify(f, {1: Fraction(1)}))

    def test_mixed_solution(self):
        f = MixedMap.from_blocks(MixedSpace(1, 1), MixedSpace(1, 1), A=[[3]], C=[[1]], D=[[2]])
        x = solve_mixed(f, {0: 6, 1: Fraction(1)})
        self.assertEqual(f.apply(x), {0: 6, 1: Fraction(1)})

    def test_random_solutions_and_certificates(self):
        rng = np.random.default_rng(11)
        for _ in range(30):
            source = MixedSpace(int(rng.integers(0, 3)), int(rng.integers(0, 3)))
            target = MixedSpace(int(rng.integers(0, 3)), int(rng.integers(0, 3)))
            f = random_map(rng, source, target)
            x = {j: int(rng.integers(-3, 4)) if j < source.nZ else Fraction(int(rng.integers(-3, 4)), 2)
                 for j in range(source.dim)}
            y = f.apply(x)
            solution = solve_mixed(f, y)
            self.assertNotIsInstance(solution, NoSolution)
            self.assertEqual(f.apply(solution), y)

            y = dict(y)
            if target.dim:
                k = int(rng.integers(0, target.dim))
                y[k] = y.get(k, 0) + (1 if k < target.nZ else Fraction(1, 5))
                answer = solve_mixed(f, {i: v for i, v in y.items() if v})
                if isinstance(answer, NoSolution):
                    self.assertTrue(answer.verify(f, {i: v for i, v in y.items() if v}))
                else:
                    self.assertEqual(f.apply(answer), {i: v for i, v in y.items() if v})




class CohomologyTests(SimpleTestCase):

    def test_times_two(self):
        C = two_term(1, 0, 1, 0, A=[[2]])
        self.assertEqual(str(cohomology_at(C, 1).module), 'Z/2')
        self.assertEqual(str(cohomology_at(C, 0).module), '0')

    def test_unit_lattice_cokernel(self):
        C = two_term(1, 0, 0, 1, C=[[1]])
        self.assertEqual(str(cohomology_at(C, 1).module), 'Q/Z')

    def test_mixed_cokernel(self):
        C = two_term(1, 0, 1, 1, A=[[2]], C=[[1]])
        self.assertEqual(cohomology_at(C, 1).module, MixedModule(rank_q=1, torsion=(2,)))

    def test_degree_out_of_range(self):
        C = two_term(1, 0, 1, 0, A=[[2]])
        with self.assertRaises(StructuralError):
            cohomology_at(C, 5)

    def test_module_rendering(self):
        module = MixedModule(1, 2, 1, (2, 4))
        self.assertEqual(str(module), 'Z + Q^2 + Q/Z + Z/2 + Z/4')
        self.assertEqual(MixedModule.parse(str(module)), module)
        self.assertEqual(MixedModule.parse('(Q/Z)^2'), MixedModule(rank_qz=2))
        with self.assertRaises(StructuralError):
            MixedModule(torsion=(4, 6))

    def test_is_coboundary_examples(self):
        Z = MixedSpace(1, 0)
        lonely = MixedComplex({0: Z}, {})
        self.assertIsInstance(is_coboundary(lonely, 0, {}), Witness)
        verdict = is_coboundary(lonely, 0, {0: 1})
        self.assertIsInstance(verdict, Certificate)
        self.assertEqual((verdict.generator, verdict.coefficient), ('Z#1', 1))

        doubling = two_term(1, 0, 1, 0, A=[[2]])
        verdict = is_coboundary(doubling, 1, {0: 2})
        self.assertEqual(verdict.cochain, {0: 1})

    def test_not_a_cocycle(self):
        doubling = two_term(1, 0, 1, 0, A=[[2]])
        with self.assertRaises(PreconditionError):
            is_coboundary(doubling, 0, {0: 1})

    def test_decode_lift_round_trip(self):
        C = two_term(1, 0, 1, 2, A=[[2]], C=[[1], [0]])
        group = cohomology_at(C, 1)
        for representative in group.representatives:
            coordinates = group.decode(representative)
            self.assertEqual(group.decode(group.lift(coordinates)).values(), coordinates.values())

    def test_invariance_and_strategies(self):
        rng = np.random.default_rng(2024)
        for trial in range(20):
            dims = [(int(rng.integers(0, 3)), int(rng.integers(0, 3))) for _ in range(3)]
            C = random_complex(rng, dims)
            D = transformed(rng, C)
            for n in range(3):
                reference = cohomology_at(C, n, 'row').module
                self.assertEqual(cohomology_at(C, n, 'column').module, reference, msg=f"trial {trial}")
                self.assertEqual(cohomology_at(D, n, 'row').module, reference, msg=f"trial {trial}")

    def test_representatives_and_random_coboundaries(self):
        rng = np.random.default_rng(5)
        for _ in range(15):
            dims = [(int(rng.integers(0, 3)), int(rng.integers(0, 3))) for _ in range(3)]
            C = random_complex(rng, dims)
            group = cohomology_at(C, 1)
            for representative in group.representatives:
                self.assertEqual(C.differential(1).apply(representative), {})
                self.assertIsInstance(is_coboundary(C, 1, representative, group), Certificate)
            x = {j: int(rng.integers(-2, 3)) if j < C.space(0).nZ else Fraction(int(rng.integers(-2, 3)), 3)
                 for j in range(C.space(0).dim)}
            boundary = C.differential(0).apply(x)
            verdict = is_coboundary(C, 1, boundary, group)
            self.assertIsInstance(verdict, Witness)
            self.assertEqual(C.differential(0).apply(verdict.cochain), boundary)

    def test_subgroup_membership(self):
        space = MixedSpace(1, 1)
        subgroup = MixedSubgroup(space, ({0: 2, 1: Fraction(1, 3)},), ())
        self.assertTrue(subgroup.contains({0: 4, 1: Fraction(2, 3)}))
        self.assertFalse(subgroup.contains({0: 2}))
