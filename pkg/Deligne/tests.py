import os
import json
import tempfile
from io import StringIO
from fractions import Fraction
from django.conf import settings
from django.test import SimpleTestCase, override_settings
from django.core.management import call_command
from django.core.management.base import CommandError
from Algebra.modules import MixedModule, ClassCoordinates
from Algebra.cohomology import Witness, Certificate
from Algebra.exceptions import ChainComplexError, PreconditionError, ResourceLimitExceeded, StructuralError
from Simplicial.cochains import SimplicialCochain, cycle_basis
from Simplicial.presets import complex_preset, fixture
from Deligne.assembly import ModelSpec, TripleCochain
from Deligne.engine import assemble, equivariant_deligne, ordinary_deligne
from Deligne.spectral import spectral_sequence
from Deligne.group_cohomology import (
    trivial_module, permutation_module, group_cohomology, bar_cohomology, divisible_cocycle,
    coefficient_module,
)
from Deligne.borel import equivariant_integral_cohomology, quotient_cohomology
from Deligne.invariants import (
    invariant_forms, curvature, result_curvature, realize_curvature, equivariant_deRham_map,
)
from Deligne.sequences import verify_exact_sequence
from Geometry.cocycles import global_form_cocycle
from Api.serializers import CochainSerializer




QZ = MixedModule(rank_qz=1)


def cyclic(n):
    return MixedModule(torsion=(n,))


def deligne(group, space, N, m, action='trivial', **kwargs):
    return equivariant_deligne(fixture(group, space, action), N, m, **kwargs)




class EngineTests(SimpleTestCase):

    def test_cyclic_groups_on_a_point(self):
        for n in (2, 3):
            self.assertEqual(deligne(f"cyclic:{n}", 'point', 1, 1).group, cyclic(n))


    def test_point_in_weight_zero(self):
        self.assertEqual(deligne('trivial', 'point', 0, 0).group, QZ)


    def test_circle_holonomy_group(self):
        self.assertEqual(deligne('trivial', 'circle:3', 1, 1).group, QZ)


    def test_octahedron_gerbes(self):
        self.assertEqual(deligne('trivial', 'sphere:octahedron', 2, 2).group, QZ)


    def test_manifold_degrees_below_and_above_weight(self):
        # H^0 is H^0(M; T); above the weight H^m is H^{m+1}(M; Z).
        self.assertEqual(deligne('trivial', 'circle:3', 1, 0).group, QZ)
        self.assertEqual(deligne('trivial', 'circle:3', 1, 2).group, MixedModule())
        self.assertEqual(deligne('trivial', 'sphere:octahedron', 1, 2).group, MixedModule())


    def test_bundles_with_connection_on_the_sphere(self):
        self.assertEqual(deligne('trivial', 'sphere:octahedron', 1, 1).group, MixedModule(rank_z=1, rank_q=7))


    def test_trivial_group_is_ordinary(self):
        for name in ('point', 'circle:3'):
            for m in range(3):
                self.assertEqual(
                    deligne('trivial', name, 1, m).group, ordinary_deligne(complex_preset(name), 1, m).group
                )


    def test_inductive_cover_agrees(self):
        for m in (0, 1):
            self.assertEqual(
                deligne('cyclic:2', 'point', 1, m, cover='inductive').group,
                deligne('cyclic:2', 'point', 1, m).group,
            )


    def test_inductive_cover_agrees_on_a_rotated_circle(self):
        for m in (0, 1):
            inductive = deligne('cyclic:2', 'circle:4', 1, m, 'rotation', cover='inductive').group
            translated = deligne('cyclic:2', 'circle:4', 1, m, 'rotation', cover='translated').group
            self.assertEqual(inductive, translated)
            self.assertEqual(translated, QZ)


    def test_decode_lift_round_trip(self):
        result = deligne('cyclic:3', 'point', 1, 1)
        for k in range(3):
            cochain = result.lift(ClassCoordinates(torsion=[k]))
            self.assertTrue(result.is_cocycle(cochain))
            self.assertEqual(result.decode(cochain).torsion, [k])


    def test_generator_has_exact_order(self):
        result = deligne('cyclic:3', 'point', 1, 1)
        generator = result.representatives[0]
        self.assertIsInstance(result.is_coboundary(generator), Certificate)
        verdict = result.is_coboundary(generator * 3)
        self.assertIsInstance(verdict, Witness)
        self.assertEqual(result.assembly.apply_D(verdict.cochain), generator * 3)


    def test_perturbed_cochain_is_rejected(self):
        result = deligne('cyclic:3', 'point', 1, 1)
        cell = next(cell for cell in result.assembly.space(2).labels if cell.slot == 1)
        broken = result.representatives[0] + TripleCochain(2, {cell: Fraction(1, 7)})
        with self.assertRaises(PreconditionError) as raised:
            result.decode(broken)
        self.assertEqual(raised.exception.code, 'not_cocycle')


    def test_cochain_of_wrong_degree(self):
        with self.assertRaises(StructuralError):
            TripleCochain(2, {(0, (), (0,), 1, (0,)): 1})


    def test_resource_limit(self):
        with override_settings(DELIGNE={**settings.DELIGNE, 'MAX_DIMENSION': 5}):
            with self.assertRaises(ResourceLimitExceeded) as raised:
                deligne('trivial', 'circle:3', 1, 1)
        self.assertGreater(raised.exception.dimension, 5)


    def test_corrupted_sign_convention_breaks_d_squared(self):
        with override_settings(DELIGNE={**settings.DELIGNE, 'SIGN_CONVENTION': 'corrupted'}):
            with self.assertRaises(ChainComplexError):
                deligne('trivial', 'circle:3', 1, 1)


    def test_window_must_fit_truncation(self):
        action = fixture('trivial', 'point')
        with self.assertRaises(StructuralError):
            ModelSpec(action, 1, (0, 2), truncation=3)


    def test_timing_counts_coordinates(self):
        timing = deligne('cyclic:2', 'point', 1, 1).timing()
        self.assertIn('2', timing)
        self.assertEqual(set(timing['2']), {'Z', 'Q'})




class SpectralSequenceTests(SimpleTestCase):

    def test_first_page_of_a_point(self):
        sequence = spectral_sequence(fixture('cyclic:2', 'point'), 1, window=(0, 1))
        self.assertEqual(sequence.page(1).entry(0, 0), QZ)
        self.assertEqual(sequence.page(1).entry(1, 0), MixedModule(rank_qz=2))


    def test_second_page_is_group_cohomology(self):
        action = fixture('cyclic:2', 'point')
        sequence = spectral_sequence(action, 1, window=(0, 2))
        expected = group_cohomology(coefficient_module(action, 1, 0), 1)
        self.assertEqual(expected, cyclic(2))
        self.assertEqual(sequence.page(2).entry(1, 0), expected)
        self.assertEqual(sequence.page(2).entry(2, 0), group_cohomology(trivial_module(action.group, 'Q/Z'), 2))


    def test_infinity_page_adds_up(self):
        for action in (fixture('cyclic:2', 'point'), fixture('klein4', 'point'), fixture('trivial', 'circle:3')):
            sequence = spectral_sequence(action, 1, window=(0, 2))
            for m in range(3):
                self.assertTrue(sequence.is_consistent(m), f"{action} m={m}")


    def test_differentials_square_to_zero(self):
        sequence = spectral_sequence(fixture('cyclic:3', 'point'), 1, window=(0, 1))
        self.assertTrue(sequence.page(1).differential_squares_to_zero(0, 0))
        self.assertTrue(sequence.page(1).differential_squares_to_zero(1, 0))


    def test_table_keys(self):
        sequence = spectral_sequence(fixture('cyclic:2', 'point'), 1, window=(0, 0))
        self.assertEqual(sequence.page(1).as_table(), {'0,0': 'Q/Z', '1,-1': '0'})




class GroupCohomologyTests(SimpleTestCase):

    def test_trivial_coefficients(self):
        z2, z3 = fixture('cyclic:2', 'point').group, fixture('cyclic:3', 'point').group
        self.assertEqual(group_cohomology(trivial_module(z3, 'Q/Z'), 1), cyclic(3))
        self.assertEqual(group_cohomology(trivial_module(z2, 'Z'), 2), cyclic(2))
        self.assertEqual(group_cohomology(trivial_module(z2, 'Z'), 1), MixedModule())
        self.assertEqual(group_cohomology(trivial_module(z2, 'Q/Z'), 0), QZ)
        self.assertEqual(group_cohomology(trivial_module(z2, 'Q'), 1), MixedModule())
        self.assertEqual(group_cohomology(trivial_module(z2, 'Z/2'), 1), cyclic(2))


    def test_discrete_torsion_of_klein_four(self):
        klein = fixture('klein4', 'point').group
        self.assertEqual(group_cohomology(trivial_module(klein, 'Q/Z'), 2), cyclic(2))
        self.assertEqual(group_cohomology(trivial_module(fixture('cyclic:2', 'point').group, 'Q/Z'), 2), MixedModule())


    def test_permutation_module_is_induced(self):
        z2 = fixture('cyclic:2', 'point').group
        self.assertEqual(group_cohomology(permutation_module(z2, 'Z'), 0), MixedModule(rank_z=1))
        self.assertEqual(group_cohomology(permutation_module(z2, 'Z'), 1), MixedModule())


    def test_character_cocycles(self):
        z2 = fixture('cyclic:2', 'point').group
        data, vector = divisible_cocycle(z2, {(1,): Fraction(1, 2)})
        self.assertFalse(data.decode(vector).is_zero)
        data, vector = divisible_cocycle(z2, {(1,): Fraction(1)})
        self.assertTrue(data.decode(vector).is_zero)


    def test_non_cocycle_is_rejected(self):
        z2 = fixture('cyclic:2', 'point').group
        with self.assertRaises(PreconditionError) as raised:
            divisible_cocycle(z2, {(1,): Fraction(1, 3)})
        self.assertEqual(raised.exception.code, 'not_cocycle')


    def test_bar_cohomology_degrees(self):
        with self.assertRaises(StructuralError):
            bar_cohomology(trivial_module(fixture('trivial', 'point').group, 'Z'), -1)




class BorelTests(SimpleTestCase):

    def test_free_rotation_matches_quotient(self):
        action = fixture('cyclic:2', 'circle:4', 'rotation')
        for m in range(3):
            self.assertEqual(equivariant_integral_cohomology(action, m, 'Z'), quotient_cohomology(action, m))
        self.assertEqual(quotient_cohomology(action, 1), MixedModule(rank_z=1))


    def test_classifying_space_of_cyclic_group(self):
        action = fixture('cyclic:2', 'point')
        self.assertEqual(equivariant_integral_cohomology(action, 2, 'Z'), cyclic(2))
        self.assertEqual(equivariant_integral_cohomology(action, 1, 'T'), cyclic(2))
        self.assertEqual(equivariant_integral_cohomology(action, 1, 'Q'), MixedModule())


    def test_quotient_needs_free_action(self):
        with self.assertRaises(PreconditionError) as raised:
            quotient_cohomology(fixture('cyclic:2', 'point'), 0)
        self.assertEqual(raised.exception.code, 'not_free')




class InvariantFormTests(SimpleTestCase):

    def test_invariant_forms_of_rotated_square(self):
        action = fixture('cyclic:2', 'circle:4', 'rotation')
        forms = invariant_forms(action, 1)
        self.assertEqual((forms.dimension, len(forms.closed)), (2, 2))
        self.assertEqual(invariant_forms(action, 0).dimension, 2)


    def test_flat_circle_has_no_curvature(self):
        result = deligne('trivial', 'circle:3', 1, 1)
        self.assertTrue(result_curvature(result).is_zero())


    def test_realize_period_one_three_form(self):
        action = fixture('trivial', 'sphere:boundary4simplex')
        X = action.space
        form = SimplicialCochain(3, {X.simplices(3)[0]: 1}, 'Q', X)
        verdict = realize_curvature(action, 2, form)
        self.assertIsInstance(verdict, Witness)
        self.assertEqual(curvature(action, 2, verdict.cochain).values, form.values)
        fundamental = cycle_basis(X, 3)[0]
        self.assertEqual(abs(form.pairing(fundamental)), 1)
        self.assertEqual(equivariant_deRham_map(action, 2, verdict.cochain).component(0, 3).values, form.values)


    def test_fractional_period_is_not_a_curvature(self):
        action = fixture('trivial', 'sphere:boundary4simplex')
        X = action.space
        form = SimplicialCochain(3, {X.simplices(3)[0]: Fraction(1, 2)}, 'Q', X)
        self.assertIsInstance(realize_curvature(action, 2, form), Certificate)


    def test_realize_needs_closed_invariant_forms(self):
        sphere = fixture('trivial', 'sphere:boundary4simplex')
        form = SimplicialCochain(2, {sphere.space.simplices(2)[0]: 1}, 'Q', sphere.space)
        with self.assertRaises(PreconditionError) as raised:
            realize_curvature(sphere, 1, form)
        self.assertEqual(raised.exception.code, 'not_closed')
        square = fixture('cyclic:2', 'circle:4', 'rotation')
        form = SimplicialCochain(1, {square.space.simplices(1)[0]: 1}, 'Q', square.space)
        with self.assertRaises(PreconditionError) as raised:
            realize_curvature(square, 0, form)
        self.assertEqual(raised.exception.code, 'not_invariant')


    def test_curvature_degree(self):
        with self.assertRaises(PreconditionError):
            curvature(fixture('trivial', 'circle:3'), 1, TripleCochain(1))




class ExactSequenceTests(SimpleTestCase):

    def test_integral_sequence(self):
        report = verify_exact_sequence(fixture('trivial', 'circle:3'), 1, 'integral', (0, 1))
        self.assertTrue(report.exact, report.failures())
        self.assertTrue(report.checks)


    def test_forms_sequence(self):
        for kind in ('forms', 'invariant_forms'):
            report = verify_exact_sequence(fixture('trivial', 'circle:3'), 1, kind, (1, 1))
            self.assertTrue(report.exact, report.failures())


    def test_equivariant_cohomology_of_free_rotation(self):
        report = verify_exact_sequence(fixture('cyclic:2', 'circle:4', 'rotation'), 1, 'equivariant_cohomology', (2, 2))
        self.assertTrue(report.exact, report.failures())
        self.assertEqual(len(report.identifications), 2)


    def test_unknown_sequence(self):
        with self.assertRaises(StructuralError):
            verify_exact_sequence(fixture('trivial', 'point'), 1, 'spectral')


    def test_assembly_cache_is_shared(self):
        action = fixture('cyclic:2', 'point')
        self.assertIs(assemble(ModelSpec(action, 1, (1, 1))), assemble(ModelSpec(action, 1, (1, 1))))




class CommandTests(SimpleTestCase):

    def setUp(self):
        self.directory = tempfile.TemporaryDirectory()
        self.addCleanup(self.directory.cleanup)


    def write(self, name, data):
        path = os.path.join(self.directory.name, name)
        with open(path, 'w') as stream:
            json.dump(data, stream)
        return path


    def run_problem(self, data, *args):
        path = self.write('problem.json', data)
        out = os.path.join(self.directory.name, 'problem.report.json')
        call_command('run', path, *args, stdout=StringIO())
        with open(out, 'rb') as stream:
            return stream.read()


    def test_compute_report(self):
        report = json.loads(self.run_problem({'group': 'cyclic:3', 'complex': 'point', 'task': 'compute', 'parameters': {'N': 1, 'm': 1}}))
        self.assertTrue(report['verified'])
        self.assertEqual(report['results']['cohomology']['1']['group'], 'Z/3')
        self.assertEqual(report['problem']['group']['elements'], ['0', '1', '2'])
        self.assertEqual(list(report), sorted(report))


    def test_threads_give_identical_reports(self):
        data = {'group': 'cyclic:2', 'complex': 'circle:4', 'action': 'rotation', 'task': 'compute', 'parameters': {'N': 1, 'window': [0, 2]}}
        self.assertEqual(self.run_problem(data, '--threads', '1'), self.run_problem(data, '--threads', '2'))


    def test_window_option(self):
        data = {'group': 'cyclic:3', 'complex': 'point', 'task': 'compute', 'parameters': {'N': 1}}
        report = json.loads(self.run_problem(data, '--window', '0:1', '--quiet'))
        self.assertEqual(set(report['results']['cohomology']), {'0', '1'})


    def test_malformed_facets(self):
        path = self.write('bad.json', {'group': 'trivial', 'complex': {'facets': [['a', 'b'], []]}, 'task': 'compute', 'parameters': {'N': 1}})
        with self.assertRaises(CommandError) as raised:
            call_command('run', path, stdout=StringIO())
        self.assertEqual(raised.exception.returncode, 1)
        self.assertIn('complex.facets[1]', str(raised.exception))


    def test_missing_file(self):
        with self.assertRaises(CommandError) as raised:
            call_command('run', os.path.join(self.directory.name, 'absent.json'), stdout=StringIO())
        self.assertEqual(raised.exception.returncode, 1)


    def test_invalid_cocycle_fails_verification(self):
        circle = fixture('trivial', 'circle:3')
        X = circle.space
        c = global_form_cocycle('bundle', circle, SimplicialCochain(1, {X.simplices(1)[0]: Fraction(1, 2)}, 'Q', X))
        cell = next(cell for cell in c.cochain.entries if cell.slot == 2)
        broken = c.cochain + TripleCochain(2, {cell: Fraction(1, 5)})
        entries = CochainSerializer(broken, context={'action': circle}).data
        with self.assertRaises(CommandError) as raised:
            self.run_problem({'group': 'trivial', 'complex': 'circle:3', 'task': 'classify', 'parameters': {'kind': 'bundle', 'cocycle': entries}})
        self.assertEqual(raised.exception.returncode, 2)
        with open(os.path.join(self.directory.name, 'problem.report.json')) as stream:
            self.assertFalse(json.load(stream)['results']['valid'])


    def test_corrupted_sign_convention(self):
        data = {'group': 'trivial', 'complex': 'circle:3', 'task': 'compute', 'parameters': {'N': 1, 'm': 1}}
        with override_settings(DELIGNE={**settings.DELIGNE, 'SIGN_CONVENTION': 'corrupted'}):
            with self.assertRaises(CommandError) as raised:
                self.run_problem(data)
        self.assertEqual(raised.exception.returncode, 2)


    def test_quick_selftest(self):
        stdout = StringIO()
        call_command('selftest', stdout=stdout)
        self.assertIn('quick selftest passed', stdout.getvalue())


    def test_selftest_catches_a_corrupted_sign_convention(self):
        stdout = StringIO()
        with override_settings(DELIGNE={**settings.DELIGNE, 'SIGN_CONVENTION': 'corrupted', 'THREADS': 1}):
            with self.assertRaises(CommandError) as raised:
                call_command('selftest', stdout=stdout)
        self.assertEqual(raised.exception.returncode, 2)
        self.assertIn('FAIL  d_squared', stdout.getvalue())
