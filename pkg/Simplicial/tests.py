import numpy as np
from fractions import Fraction
from django.test import SimpleTestCase, override_settings
from django.core.exceptions import ValidationError
from Algebra.modules import MixedModule
from Algebra.exceptions import PreconditionError
from Simplicial.complexes import build_complex, closed_star
from Simplicial.groups import FiniteGroup, group_preset, cyclic_group
from Simplicial.actions import SimplicialAction, validate_action
from Simplicial.nerve import NervePoint, face_map, degeneracy_map, check_relations
from Simplicial.covers import cover_for, resolve_patch
from Simplicial.presets import complex_preset, action_preset, fixture
from Simplicial.cochains import (
    SimplicialCochain, coboundary, simplicial_cohomology, is_integral_closed, is_acyclic,
)




def hollow_triangle():
    return build_complex([['a', 'b'], ['b', 'c'], ['c', 'a']])


def labelled(complex_, simplices):
    return {complex_.label(s) for s in simplices}


def random_cochain(rng, support, q):
    values = {s: Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 4))) for s in support.simplices(q)}
    return SimplicialCochain(q, values, 'Q', support)




class ComplexTests(SimpleTestCase):

    def test_hollow_triangle(self):
        triangle = hollow_triangle()
        self.assertEqual((triangle.count(0), triangle.count(1), triangle.count(2)), (3, 3, 0))
        self.assertEqual(triangle.labels, ('a', 'b', 'c'))


    def test_octahedron(self):
        octahedron = complex_preset('sphere:octahedron')
        self.assertEqual([octahedron.count(q) for q in range(3)], [6, 12, 8])
        self.assertEqual(octahedron.euler_characteristic(), 2)


    def test_tetrahedron_and_pairs(self):
        sphere = complex_preset('sphere:tetrahedron')
        self.assertEqual([sphere.count(q) for q in range(3)], [4, 6, 4])
        self.assertEqual(sphere.euler_characteristic(), 2)
        pair = complex_preset('pair:sphere:tetrahedron')
        self.assertEqual([pair.count(q) for q in range(3)], [8, 12, 8])
        self.assertEqual(pair.labels[:2], ('a1', 'b1'))


    def test_point(self):
        point = complex_preset('point')
        self.assertEqual((point.n_vertices, point.dimension), (1, 0))


    def test_three_sphere(self):
        sphere = complex_preset('sphere:boundary4simplex')
        self.assertEqual([sphere.count(q) for q in range(4)], [5, 10, 10, 5])
        self.assertEqual(sphere.euler_characteristic(), 0)


    def test_empty_facet(self):
        with self.assertRaises(ValidationError) as raised:
            build_complex([['a', 'b'], []])
        self.assertEqual(raised.exception.code, 'empty_facet')


    def test_unknown_vertex(self):
        with self.assertRaises(ValidationError) as raised:
            build_complex([['a', 'q']], vertices=['a', 'b'])
        self.assertEqual(raised.exception.code, 'unknown_vertex')
        with self.assertRaises(ValidationError) as raised:
            closed_star(hollow_triangle(), ['z'])
        self.assertEqual(raised.exception.code, 'unknown_vertex')


    def test_closed_stars(self):
        triangle = hollow_triangle()
        self.assertEqual(labelled(triangle, closed_star(triangle, ['a']).all_simplices()), {'a', 'b', 'c', 'ab', 'ac'})
        self.assertEqual(labelled(triangle, closed_star(triangle, ['a', 'b']).all_simplices()), {'a', 'b', 'ab'})
        square = complex_preset('circle:4')
        self.assertTrue(closed_star(square, ['a', 'c']).is_empty)


    def test_stars_are_acyclic(self):
        for name in ('circle:3', 'circle:4', 'sphere:octahedron', 'sphere:boundary4simplex'):
            space = complex_preset(name)
            for simplex in space.all_simplices():
                with self.subTest(complex=name, simplex=simplex):
                    self.assertTrue(is_acyclic(space.closed_star(simplex)))


    def test_star_translation(self):
        action = fixture('cyclic:2', 'sphere:octahedron', 'antipodal')
        space = action.space
        for simplex in space.all_simplices():
            star = space.closed_star(simplex)
            image = {action.act(1, s) for s in star.all_simplices()}
            self.assertEqual(image, set(space.closed_star(action.act(1, simplex)).all_simplices()))




class CochainTests(SimpleTestCase):

    def test_vertex_coboundary(self):
        triangle = hollow_triangle()
        f = SimplicialCochain(0, {(0,): 1}, 'Z', triangle)
        df = coboundary(f)
        self.assertEqual(df.value_on((0, 1)), -1)
        self.assertEqual(df.value_on((2, 0)), 1)
        self.assertEqual(df.value_on((1, 2)), 0)


    def test_constant_is_closed(self):
        octahedron = complex_preset('sphere:octahedron')
        constant = SimplicialCochain(0, {(v,): 3 for v in range(6)}, 'Z', octahedron)
        self.assertTrue(coboundary(constant).is_zero())


    def test_coboundary_squares_to_zero(self):
        rng = np.random.default_rng(7)
        for name in ('circle:5', 'sphere:octahedron', 'sphere:boundary4simplex'):
            space = complex_preset(name)
            for q in range(space.dimension):
                c = random_cochain(rng, space, q)
                self.assertTrue(coboundary(coboundary(c)).is_zero())


    def test_oriented_values(self):
        triangle = hollow_triangle()
        c = SimplicialCochain.from_oriented(1, {(2, 0): Fraction(1, 3)}, support=triangle)
        self.assertEqual(c.values, {(0, 2): Fraction(-1, 3)})


    def test_simplicial_cohomology(self):
        triangle = hollow_triangle()
        self.assertEqual(simplicial_cohomology(triangle, 'Z', 1), MixedModule(rank_z=1))
        self.assertEqual(simplicial_cohomology(triangle, 'Z', 0), MixedModule(rank_z=1))
        self.assertEqual(simplicial_cohomology(complex_preset('sphere:octahedron'), 'Z', 2), MixedModule(rank_z=1))
        self.assertEqual(simplicial_cohomology(complex_preset('sphere:octahedron'), 'Z', 1), MixedModule())
        point = complex_preset('point')
        self.assertEqual(simplicial_cohomology(point, 'Z', 0), MixedModule(rank_z=1))
        for n in (1, 2, 3):
            self.assertTrue(simplicial_cohomology(point, 'Z', n).is_zero)


    def test_circle_coefficients(self):
        triangle = hollow_triangle()
        self.assertEqual(str(simplicial_cohomology(triangle, 'T', 0)), 'Q/Z')
        self.assertEqual(str(simplicial_cohomology(triangle, 'T', 1)), 'Q/Z')
        self.assertEqual(str(simplicial_cohomology(triangle, 'Q', 1)), 'Q')
        self.assertEqual(str(simplicial_cohomology(complex_preset('point'), 'T', 0)), 'Q/Z')
        self.assertEqual(str(simplicial_cohomology(complex_preset('sphere:octahedron'), 'T', 1)), '0')


    def test_integral_periods(self):
        triangle = hollow_triangle()
        third = Fraction(1, 3)
        c = SimplicialCochain.from_oriented(1, {(0, 1): third, (1, 2): third, (2, 0): third}, support=triangle)
        self.assertTrue(is_integral_closed(c))
        half = SimplicialCochain.from_oriented(1, {(0, 1): Fraction(1, 2)}, support=triangle)
        self.assertFalse(is_integral_closed(half))
        self.assertTrue(is_integral_closed(SimplicialCochain(1, {}, 'Q', triangle)))


    def test_integral_periods_need_closed(self):
        octahedron = complex_preset('sphere:octahedron')
        with self.assertRaises(PreconditionError) as raised:
            is_integral_closed(SimplicialCochain(1, {(0, 2): 1}, 'Q', octahedron))
        self.assertEqual(raised.exception.code, 'not_closed')




class GroupTests(SimpleTestCase):

    def test_presets(self):
        self.assertEqual(group_preset('cyclic:4').order, 4)
        self.assertTrue(group_preset('klein4').is_abelian())
        self.assertFalse(group_preset('symmetric:3').is_abelian())
        self.assertTrue(group_preset('trivial').is_trivial())
        with self.assertRaises(ValidationError):
            group_preset('dihedral:4')


    def test_inverses(self):
        group = cyclic_group(5)
        for g in group.elements:
            self.assertEqual(group.mul(g, group.inv(g)), group.identity)


    def test_broken_associativity(self):
        with self.assertRaises(ValidationError) as raised:
            FiniteGroup(['e', 'a', 'b'], [[0, 1, 2], [1, 0, 0], [2, 0, 0]])
        self.assertEqual(raised.exception.code, 'associativity')


    def test_missing_identity(self):
        with self.assertRaises(ValidationError) as raised:
            FiniteGroup(['a', 'b'], [[0, 0], [0, 0]])
        self.assertEqual(raised.exception.code, 'identity')




class ActionTests(SimpleTestCase):

    def test_rotation_of_square_is_valid(self):
        report = validate_action(fixture('cyclic:2', 'circle:4', 'rotation'))
        self.assertTrue(report['valid'])
        self.assertEqual(report['warnings'], [])


    def test_point_fixtures(self):
        for group in ('cyclic:3', 'klein4'):
            report = validate_action(fixture(group, 'point'))
            self.assertGreater(report['checks']['faces'], 0)


    def test_not_simplicial(self):
        square = complex_preset('circle:4')
        action = SimplicialAction.from_generators(cyclic_group(2), square, {1: [1, 0, 2, 3]})
        with self.assertRaises(ValidationError) as raised:
            validate_action(action)
        self.assertEqual(raised.exception.code, 'not_simplicial')


    def test_generators_must_define_homomorphism(self):
        square = complex_preset('circle:4')
        with self.assertRaises(ValidationError) as raised:
            SimplicialAction.from_generators(cyclic_group(2), square, {1: [1, 2, 3, 0]})
        self.assertEqual(raised.exception.code, 'homomorphism')


    def test_setwise_fixed_simplex_warns(self):
        action = fixture('cyclic:2', 'circle:4', 'trivial')
        self.assertEqual(validate_action(action)['warnings'], [])
        reflection = SimplicialAction.from_generators(cyclic_group(2), complex_preset('circle:4'), {1: [1, 0, 3, 2]})
        self.assertTrue(validate_action(reflection)['warnings'])


    def test_freeness(self):
        self.assertTrue(fixture('cyclic:2', 'circle:4', 'rotation').is_free())
        self.assertFalse(fixture('cyclic:2', 'point').is_free())




class NerveTests(SimpleTestCase):

    def setUp(self):
        self.action = fixture('cyclic:3', 'circle:3', 'rotation')
        self.x = (0,)


    def test_faces_at_level_one(self):
        point = NervePoint((1,), self.x)
        self.assertEqual(face_map(self.action, 1, 0)(point), NervePoint((), self.x))
        self.assertEqual(face_map(self.action, 1, 1)(point), NervePoint((), (1,)))


    def test_middle_face_multiplies(self):
        point = NervePoint((1, 2), self.x)
        self.assertEqual(face_map(self.action, 2, 1)(point), NervePoint((0,), self.x))


    def test_degeneracies(self):
        self.assertEqual(degeneracy_map(self.action, 0, 0)(NervePoint((), self.x)), NervePoint((0,), self.x))
        self.assertEqual(degeneracy_map(self.action, 1, 1)(NervePoint((2,), self.x)), NervePoint((2, 0), self.x))


    def test_face_after_degeneracy(self):
        for copy in self.action.group.tuples(2):
            point = NervePoint(copy, (0, 1))
            for i in range(3):
                self.assertEqual(face_map(self.action, 3, i)(degeneracy_map(self.action, 2, i)(point)), point)


    def test_relations_up_to_level_four(self):
        for action in (fixture('cyclic:2', 'circle:4', 'rotation'), fixture('cyclic:3', 'point'), fixture('klein4', 'point')):
            counts = check_relations(action, 4)
            self.assertTrue(all(counts.values()))


    def test_face_out_of_range(self):
        with self.assertRaises(ValidationError):
            face_map(self.action, 1, 2)




class CoverTests(SimpleTestCase):

    def setUp(self):
        self.action = fixture('cyclic:2', 'circle:4', 'rotation')


    def test_inductive_base_case(self):
        patch = resolve_patch(self.action, 0, [(1,)])
        self.assertEqual(patch.core, (1,))
        self.assertEqual(set(patch.star.all_simplices()), set(self.action.space.closed_star((1,)).all_simplices()))


    def test_inductive_level_one(self):
        patch = resolve_patch(self.action, 1, [(0, 1)], (1,))
        self.assertEqual(patch.core, (1, 2))
        self.assertEqual(labelled(self.action.space, patch.star.all_simplices()), {'b', 'c', 'bc'})


    def test_inductive_empty_patch(self):
        self.assertTrue(resolve_patch(self.action, 1, [(0, 0)], (1,)).is_empty)


    def test_face_inclusions(self):
        for name in ('translated', 'inductive'):
            cover = cover_for(self.action, name)
            for level in (1, 2):
                for copy in self.action.group.tuples(level):
                    for j in (0, 1):
                        for index in cover.multi_indices(level, copy, j):
                            self.assertTrue(cover.check_face_inclusions(level, copy, index))


    def test_every_simplex_is_covered(self):
        space = self.action.space
        for level in range(4):
            for copy in self.action.group.tuples(level):
                cover = cover_for(self.action, 'translated')
                covered = set()
                for index in cover.multi_indices(level, copy, 0):
                    covered |= set(cover.patch(level, copy, index).star.all_simplices())
                self.assertEqual(covered, set(space.all_simplices()))


    @override_settings(DELIGNE={'COVER': 'inductive'})
    def test_cover_setting(self):
        action = fixture('trivial', 'point')
        self.assertEqual(cover_for(action).name, 'inductive')


    def test_translated_multi_indices_are_simplices(self):
        cover = cover_for(self.action, 'translated')
        self.assertEqual(cover.multi_indices(0, (), 1), [(0, 1), (0, 3), (1, 2), (2, 3)])
        self.assertEqual(cover.multi_indices(0, (), 2), [])


    def test_action_presets(self):
        octahedron = complex_preset('sphere:octahedron')
        antipodal = action_preset(group_preset('cyclic:2'), octahedron, 'antipodal')
        self.assertEqual(antipodal.space.labels[antipodal.vertex(1, 0)], 'X')
        swap = fixture('cyclic:2', 'pair:circle:3', 'swap')
        self.assertTrue(swap.is_free())
