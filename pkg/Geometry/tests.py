from fractions import Fraction
from unittest.mock import patch
from django.test import SimpleTestCase
from Algebra.modules import MixedModule, ClassCoordinates
from Algebra.cohomology import Witness, Certificate, NoSolution
from Algebra.exceptions import PreconditionError, StructuralError
from Simplicial.cochains import SimplicialCochain, cycle_basis
from Simplicial.presets import fixture
from Deligne.assembly import ModelSpec, TripleCochain
from Deligne.engine import assemble
from Deligne.invariants import realize_curvature, average
from Geometry.cocycles import GeomCocycle, group_cochain_cocycle, global_form_cocycle, form_cochain
from Geometry.classify import (
    GeometricClassifier, validate_bundle_cocycle, bundle_class, bundles_isomorphic, bundle_curvature,
    bundle_flat_test, validate_gerbe_cocycle, gerbe_class, gerbes_isomorphic, gerbe_flat_test, three_curvature,
)
from Geometry.obstructions import (
    restrict_to_level_zero, extend_to_equivariant, obstruction_bundle, obstruction_gerbe, lifting_torsor,
)
from Geometry.twists import twist_gerbe, twist_orbit, discrete_torsion, twist_values
from Geometry.enumeration import farey_values, enumerate_bounded_cocycles, partition_by_class




def character(action, k):
    n = action.group.order
    return group_cochain_cocycle('bundle', action, {(g,): Fraction(g * k % n, n) for g in action.group.elements})


def one_form(action, values):
    X = action.space
    return SimplicialCochain(1, {X.simplices(1)[i]: v for i, v in values.items()}, 'Q', X)


def holonomy(action, h, edge=0):
    return global_form_cocycle('bundle', action, one_form(action, {edge: h}))




class BundleTests(SimpleTestCase):

    def setUp(self):
        self.point = fixture('cyclic:3', 'point')
        self.circle = fixture('trivial', 'circle:3')


    def test_zero_cocycle(self):
        zero = GeomCocycle.zero('bundle', self.point)
        self.assertTrue(validate_bundle_cocycle(self.point, zero).ok)
        self.assertTrue(bundle_class(self.point, zero).is_zero)


    def test_characters_are_cocycles(self):
        for k in range(3):
            self.assertTrue(validate_bundle_cocycle(self.point, character(self.point, k)).ok)


    def test_characters_classify(self):
        classes = [bundle_class(self.point, character(self.point, k)) for k in range(3)]
        self.assertEqual(classes[0].group, MixedModule(torsion=(3,)))
        self.assertTrue(classes[0].is_zero)
        self.assertEqual({c.coordinates.torsion[0] for c in classes}, {0, 1, 2})
        self.assertEqual(classes[1].as_dict()['group'], 'Z/3')


    def test_character_isomorphisms(self):
        first, second = character(self.point, 1), character(self.point, 2)
        self.assertIsInstance(bundles_isomorphic(self.point, first, second), Certificate)
        self.assertIsInstance(bundles_isomorphic(self.point, first, first), Witness)


    def test_adding_a_coboundary(self):
        c = character(self.point, 1)
        classifier = GeometricClassifier(self.point, 'bundle')
        assembly = classifier.result.assembly
        cell = next(cell for cell in assembly.space(1).labels if cell.slot == 1)
        shifted = GeomCocycle('bundle', self.point, c.cochain + assembly.apply_D(TripleCochain(1, {cell: Fraction(2, 5)})))
        verdict = bundles_isomorphic(self.point, c, shifted)
        self.assertIsInstance(verdict, Witness)


    def test_non_cocycle_character(self):
        with self.assertRaises(PreconditionError) as raised:
            group_cochain_cocycle('bundle', self.point, {(1,): Fraction(1, 2)})
        self.assertEqual(raised.exception.code, 'not_cocycle')


    def test_holonomy_classes(self):
        self.assertEqual(bundle_class(self.circle, holonomy(self.circle, Fraction(1, 2))).coordinates.divisible, [Fraction(1, 2)])
        third = bundle_class(self.circle, holonomy(self.circle, Fraction(1, 3))).coordinates.divisible
        self.assertIn(third, ([Fraction(1, 3)], [Fraction(2, 3)]))
        self.assertTrue(bundle_class(self.circle, holonomy(self.circle, 1)).is_zero)


    def test_holonomy_does_not_depend_on_the_edge(self):
        # Same period around the cycle, carried by different edges.
        cycle = cycle_basis(self.circle.space, 1)[0]
        edges = self.circle.space.simplices(1)
        first, second = (holonomy(self.circle, Fraction(1, 4) * cycle[edges[k]], k) for k in (0, 2))
        verdict = bundles_isomorphic(self.circle, first, second)
        self.assertIsInstance(verdict, Witness)


    def test_perturbed_connection(self):
        c = holonomy(self.circle, Fraction(1, 2))
        cell = next(cell for cell in c.cochain.entries if cell.slot == 2)
        broken = GeomCocycle('bundle', self.circle, c.cochain + TripleCochain(2, {cell: Fraction(1, 5)}))
        outcome = validate_bundle_cocycle(self.circle, broken)
        self.assertFalse(outcome.ok)
        self.assertIn('connection_compatibility', outcome.conditions())
        with self.assertRaises(PreconditionError):
            bundle_class(self.circle, broken)


    def test_flat_test_must_agree_with_the_curvature(self):
        c = holonomy(self.circle, Fraction(1, 3))
        bent = one_form(self.circle, {0: Fraction(1, 3)})
        with patch.object(GeometricClassifier, 'curvature', return_value=bent):
            with self.assertRaisesMessage(StructuralError, 'disagrees with its curvature'):
                bundle_flat_test(self.circle, c)


    def test_flat_bundles(self):
        c = holonomy(self.circle, Fraction(1, 3))
        self.assertTrue(bundle_curvature(self.circle, c).is_zero())
        self.assertTrue(bundle_flat_test(self.circle, c).flat)


    def test_curved_bundle_on_the_sphere(self):
        sphere = fixture('trivial', 'sphere:octahedron')
        X = sphere.space
        form = SimplicialCochain(2, {X.simplices(2)[0]: 1}, 'Q', X)
        realized = realize_curvature(sphere, 1, form)
        self.assertIsInstance(realized, Witness)
        c = GeomCocycle('bundle', sphere, realized.cochain)
        self.assertEqual(bundle_curvature(sphere, c).values, form.values)
        self.assertFalse(bundle_flat_test(sphere, c).flat)


    def test_round_trip_through_representatives(self):
        classifier = GeometricClassifier(self.point, 'bundle')
        for k in range(3):
            handle = classifier.classify(character(self.point, k))
            self.assertEqual(classifier.classify(classifier.representative(handle)), handle)


    def test_components_by_name(self):
        c = character(self.point, 1)
        self.assertFalse(c.component('b').is_zero())
        self.assertTrue(c.component('theta').is_zero())
        self.assertEqual(set(c.components()), {'z', 'a', 'theta', 'w', 'b', 'u'})


    def test_cocycle_degree_is_checked(self):
        with self.assertRaises(PreconditionError) as raised:
            GeomCocycle('gerbe', self.point, TripleCochain(2))
        self.assertEqual(raised.exception.code, 'degree')




class GerbeTests(SimpleTestCase):

    def setUp(self):
        self.klein = fixture('klein4', 'point')


    def test_zero_gerbe(self):
        zero = GeomCocycle.zero('gerbe', self.klein)
        self.assertTrue(validate_gerbe_cocycle(self.klein, zero).ok)
        self.assertTrue(gerbe_class(self.klein, zero).is_zero)


    def test_discrete_torsion_twist(self):
        data = discrete_torsion(self.klein.group)
        self.assertEqual(data.module, MixedModule(torsion=(2,)))
        zero = GeomCocycle.zero('gerbe', self.klein)
        outcome = twist_gerbe(self.klein, zero, twist_values(data, ClassCoordinates(torsion=[1])))
        self.assertTrue(outcome.changed)
        self.assertTrue(validate_gerbe_cocycle(self.klein, outcome.twisted).ok)
        self.assertIsInstance(gerbes_isomorphic(self.klein, zero, outcome.twisted), Certificate)


    def test_coboundary_twist_preserves_the_class(self):
        group = self.klein.group
        beta = {1: Fraction(1, 3), 2: Fraction(1, 5)}
        gamma = {
            (g, h): beta.get(h, 0) - beta.get(group.mul(g, h), 0) + beta.get(g, 0)
            for g in group.elements for h in group.elements
        }
        zero = GeomCocycle.zero('gerbe', self.klein)
        outcome = twist_gerbe(self.klein, zero, gamma)
        self.assertFalse(outcome.changed)
        self.assertIsInstance(gerbes_isomorphic(self.klein, zero, outcome.twisted), Witness)


    def test_twist_needs_a_cocycle(self):
        with self.assertRaises(PreconditionError) as raised:
            twist_gerbe(self.klein, GeomCocycle.zero('gerbe', self.klein), {(1, 1): Fraction(1, 3)})
        self.assertEqual(raised.exception.code, 'not_cocycle')


    def test_three_curvature_is_checked(self):
        sphere = fixture('trivial', 'sphere:boundary4simplex')
        X = sphere.space
        zero = GeomCocycle.zero('gerbe', sphere)
        half = SimplicialCochain(3, {X.simplices(3)[0]: Fraction(1, 2)}, 'Q', X)
        with patch.object(GeometricClassifier, 'curvature', return_value=half):
            with self.assertRaisesMessage(StructuralError, 'non-integral period'):
                three_curvature(sphere, zero)
        open_form = SimplicialCochain(2, {X.simplices(2)[0]: 1}, 'Q', X)
        with patch.object(GeometricClassifier, 'curvature', return_value=open_form):
            with self.assertRaisesMessage(StructuralError, 'not closed'):
                three_curvature(sphere, zero)
        turning = fixture('cyclic:5', 'sphere:boundary4simplex', 'rotation')
        lopsided = SimplicialCochain(3, {X.simplices(3)[0]: 1}, 'Q', turning.space)
        with patch.object(GeometricClassifier, 'curvature', return_value=lopsided):
            with self.assertRaisesMessage(StructuralError, 'not G-invariant'):
                three_curvature(turning, GeomCocycle.zero('gerbe', turning))


    def test_twist_orbits(self):
        self.assertEqual(len(twist_orbit(self.klein, GeomCocycle.zero('gerbe', self.klein))), 2)
        z2 = fixture('cyclic:2', 'point')
        self.assertEqual(len(twist_orbit(z2, GeomCocycle.zero('gerbe', z2))), 1)


    def test_period_classes_on_the_sphere(self):
        sphere = fixture('trivial', 'sphere:octahedron')
        X = sphere.space
        half = SimplicialCochain(2, {X.simplices(2)[0]: Fraction(1, 2)}, 'Q', X)
        c = global_form_cocycle('gerbe', sphere, half)
        self.assertEqual(gerbe_class(sphere, c).coordinates.divisible, [Fraction(1, 2)])
        self.assertTrue(three_curvature(sphere, c).is_zero())
        self.assertTrue(gerbe_flat_test(sphere, c).flat)
        whole = global_form_cocycle('gerbe', sphere, half * 2)
        self.assertTrue(gerbe_class(sphere, whole).is_zero)


    def test_three_curvature_of_the_three_sphere(self):
        sphere = fixture('trivial', 'sphere:boundary4simplex')
        X = sphere.space
        form = SimplicialCochain(3, {X.simplices(3)[0]: 1}, 'Q', X)
        c = GeomCocycle('gerbe', sphere, realize_curvature(sphere, 2, form).cochain)
        self.assertEqual(three_curvature(sphere, c).values, form.values)
        self.assertFalse(gerbe_flat_test(sphere, c).flat)




class ObstructionTests(SimpleTestCase):

    def setUp(self):
        self.pair = fixture('cyclic:2', 'pair:circle:3', 'swap')


    def pair_cocycle(self, first, second):
        # Edge 0 lies on the first circle and its image under the swap on the second.
        X = self.pair.space
        edge = X.simplices(1)[0]
        image = self.pair.act(1, edge)
        form = SimplicialCochain(1, {edge: first, image: second}, 'Q', X)
        return form_cochain(assemble(ModelSpec(self.pair, 1, (1, 1))), form, 2)


    def test_equivariant_cocycle_extends(self):
        square = fixture('cyclic:2', 'circle:4', 'rotation')
        c = global_form_cocycle('bundle', square, average(square, one_form(square, {0: Fraction(1, 3)})))
        x = restrict_to_level_zero(c)
        report = obstruction_bundle(square, x)
        self.assertTrue(report.extendable)
        self.assertTrue(all(stage['vanishes'] for stage in report.stages))
        self.assertEqual(restrict_to_level_zero(report.extension), x)


    def test_unequal_holonomies_obstruct(self):
        x = self.pair_cocycle(Fraction(1, 2), Fraction(0))
        report = obstruction_bundle(self.pair, x)
        self.assertFalse(report.extendable)
        self.assertFalse(report.obstruction(1)['vanishes'])
        self.assertTrue(report.obstruction(1)['class'])
        self.assertIsInstance(extend_to_equivariant('bundle', self.pair, x), NoSolution)


    def test_equal_holonomies_extend(self):
        x = self.pair_cocycle(Fraction(1, 2), Fraction(1, 2))
        report = obstruction_bundle(self.pair, x)
        self.assertTrue(report.extendable)
        self.assertTrue(validate_bundle_cocycle(self.pair, report.extension).ok)
        extension = extend_to_equivariant('bundle', self.pair, x)
        self.assertIsInstance(extension, GeomCocycle)
        self.assertEqual(restrict_to_level_zero(extension), x)


    def sphere_pair_gerbe(self, first, second):
        # Face 0 lies on the first sphere and its image under the swap on the second.
        pair = fixture('cyclic:2', 'pair:sphere:tetrahedron', 'swap')
        X = pair.space
        face = X.simplices(2)[0]
        form = SimplicialCochain(2, {face: first, pair.act(1, face): second}, 'Q', X)
        return pair, form_cochain(assemble(ModelSpec(pair, 2, (2, 2))), form, 3)


    def test_unequal_periods_obstruct_a_gerbe(self):
        pair, x = self.sphere_pair_gerbe(Fraction(1, 2), Fraction(0))
        report = obstruction_gerbe(pair, x)
        self.assertFalse(report.extendable)
        self.assertFalse(report.obstruction(1)['vanishes'])
        self.assertIsInstance(extend_to_equivariant('gerbe', pair, x), NoSolution)


    def test_equal_periods_extend_a_gerbe(self):
        pair, x = self.sphere_pair_gerbe(Fraction(1, 2), Fraction(1, 2))
        report = obstruction_gerbe(pair, x)
        self.assertTrue(report.extendable)
        self.assertTrue(validate_gerbe_cocycle(pair, report.extension).ok)


    def test_level_zero_input_is_required(self):
        c = character(fixture('cyclic:2', 'point'), 1)
        with self.assertRaises(PreconditionError):
            obstruction_bundle(c.action, c.cochain)


    def test_gerbes_on_a_point_always_extend(self):
        klein = fixture('klein4', 'point')
        twisted = twist_gerbe(klein, GeomCocycle.zero('gerbe', klein), twist_values(
            discrete_torsion(klein.group), ClassCoordinates(torsion=[1]),
        )).twisted
        report = obstruction_gerbe(klein, restrict_to_level_zero(twisted))
        self.assertTrue(report.extendable)
        self.assertEqual(report.stages, [])


    def test_lifting_torsor(self):
        point = fixture('cyclic:3', 'point')
        torsor = lifting_torsor(point, GeomCocycle.zero('bundle', point))
        self.assertEqual(torsor.module, MixedModule(torsion=(3,)))
        moved = torsor.act({(1,): Fraction(1, 3), (2,): Fraction(2, 3)})
        self.assertFalse(bundle_class(point, moved).is_zero)
        self.assertIsInstance(bundles_isomorphic(point, torsor.act({(1,): 1, (2,): 2}), torsor.base), Witness)




class EnumerationTests(SimpleTestCase):

    def test_farey_values(self):
        self.assertEqual(farey_values(3), [0, Fraction(1, 3), Fraction(1, 2), Fraction(2, 3)])
        self.assertEqual(len(farey_values(8)), 22)


    def test_bounded_bundles_partition_into_classes(self):
        for n in (2, 3, 4):
            action = fixture(f"cyclic:{n}", 'point')
            classes = partition_by_class('bundle', action, enumerate_bounded_cocycles('bundle', action, 8))
            self.assertEqual(len(classes), n)
            for members in classes.values():
                self.assertIsInstance(bundles_isomorphic(action, members[0], members[-1]), Witness)


    def test_isomorphism_agrees_with_class_handles(self):
        for n in (3, 4):
            action = fixture(f"cyclic:{n}", 'point')
            classifier = GeometricClassifier(action, 'bundle')
            assembly = classifier.result.assembly
            cell = next(cell for cell in assembly.space(1).labels if cell.slot == 1)
            shift = assembly.apply_D(TripleCochain(1, {cell: Fraction(2, 5)}))
            cocycles = list(enumerate_bounded_cocycles('bundle', action, 8))
            cocycles += [GeomCocycle('bundle', action, c.cochain + shift) for c in cocycles]
            handles = [classifier.classify(c) for c in cocycles]
            self.assertEqual(len(set(handles)), n)
            for first, first_handle in zip(cocycles, handles):
                for second, second_handle in zip(cocycles, handles):
                    verdict = classifier.isomorphic(first, second)
                    if first_handle == second_handle:
                        self.assertIsInstance(verdict, Witness)
                        self.assertEqual(assembly.apply_D(verdict.cochain), (first - second).cochain)
                    else:
                        self.assertIsInstance(verdict, Certificate)


    def test_lifting_torsor_is_free_and_transitive(self):
        for n in (3, 4):
            point = fixture(f"cyclic:{n}", 'point')
            classifier = GeometricClassifier(point, 'bundle')
            torsor = lifting_torsor(point, GeomCocycle.zero('bundle', point))
            self.assertEqual(torsor.module, MixedModule(torsion=(n,)))
            orbit = [
                classifier.classify(torsor.act({(g,): Fraction(g * k % n, n) for g in point.group.elements}))
                for k in range(n)
            ]
            self.assertEqual(len(set(orbit)), n)
            self.assertTrue(orbit[0].is_zero)
            bounded = partition_by_class('bundle', point, enumerate_bounded_cocycles('bundle', point, 8))
            self.assertEqual(set(orbit), set(bounded))


    def test_enumeration_needs_a_point(self):
        with self.assertRaises(PreconditionError):
            list(enumerate_bounded_cocycles('bundle', fixture('trivial', 'circle:3'), 2))
