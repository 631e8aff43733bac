from fractions import Fraction
from django.conf import settings
from django.test import SimpleTestCase, override_settings
from Algebra.modules import MixedModule, ClassCoordinates
from Algebra.cohomology import Witness, Certificate
from Algebra.exceptions import StructuralError, PreconditionError, ResourceLimitExceeded
from Simplicial.cochains import SimplicialCochain
from Simplicial.presets import fixture
from Deligne.assembly import TripleCochain
from Deligne.engine import CONVENTIONS
from Deligne.invariants import average
from Geometry.cocycles import GeomCocycle, group_cochain_cocycle, global_form_cocycle
from Geometry.obstructions import restrict_to_level_zero
from Geometry.twists import discrete_torsion, twist_values
from Forms.problem_forms import Problem
from Facades.cohomology_facade import CohomologyFacade
from Facades.classification_facade import ClassificationFacade
from Facades.selftest_facade import SelftestFacade
from Api.serializers import render_report




def problem(action, task, **parameters):
    return Problem(None, None, None, action, task, parameters)


def character(action, k):
    n = action.group.order
    return group_cochain_cocycle('bundle', action, {(g,): Fraction(g * k % n, n) for g in action.group.elements})




class CohomologyFacadeTests(SimpleTestCase):

    def test_compute_cyclic_point(self):
        report = CohomologyFacade().run(problem(fixture('cyclic:3', 'point'), 'compute', N=1, window=(1, 1)))
        self.assertTrue(report['verified'])
        self.assertEqual(report['task'], 'compute')
        self.assertEqual(report['results']['cohomology'][1]['group'], MixedModule(torsion=(3,)))
        self.assertEqual(report['conventions'], dict(CONVENTIONS))
        self.assertIn('m=1', report['timing'])


    def test_compute_circle(self):
        report = CohomologyFacade().run(problem(fixture('trivial', 'circle:3'), 'compute', N=1, window=(1, 1)))
        self.assertEqual(report['results']['cohomology'][1]['group'], MixedModule(rank_qz=1))


    def test_threads_do_not_change_the_report(self):
        circle = fixture('trivial', 'circle:3')
        reports = [
            render_report(CohomologyFacade(threads=threads).run(problem(circle, 'compute', N=1, window=(0, 2))))
            for threads in (1, 2)
        ]
        self.assertEqual(reports[0], reports[1])


    def test_spectral_sequence_is_consistent(self):
        report = CohomologyFacade().run(problem(fixture('cyclic:2', 'point'), 'spectral', N=1, max_page=2, window=(0, 2)))
        self.assertTrue(report['verified'])
        self.assertTrue(all(report['results']['consistent'].values()))
        self.assertIn(2, report['results']['pages'])


    def test_verify_free_quotient(self):
        square = fixture('cyclic:2', 'circle:4', 'rotation')
        report = CohomologyFacade().run(problem(square, 'verify', N=1, sequence='equivariant_cohomology', window=(2, 2)))
        self.assertTrue(report['verified'])
        self.assertTrue(report['results']['exact'])
        self.assertEqual(report['results']['failures'], [])


    def test_wrong_facade_for_task(self):
        with self.assertRaises(StructuralError):
            CohomologyFacade().run(problem(fixture('cyclic:2', 'point'), 'classify', kind='bundle'))


    def test_corrupted_sign_convention(self):
        with override_settings(DELIGNE={**settings.DELIGNE, 'SIGN_CONVENTION': 'corrupted'}):
            with self.assertRaises(StructuralError):
                CohomologyFacade().run(problem(fixture('trivial', 'circle:3'), 'compute', N=1, window=(1, 1)))




class ClassificationFacadeTests(SimpleTestCase):

    def setUp(self):
        self.point = fixture('cyclic:3', 'point')
        self.klein = fixture('klein4', 'point')


    def test_classify_a_character(self):
        report = ClassificationFacade().run(problem(self.point, 'classify', kind='bundle', cocycle=character(self.point, 1).cochain))
        results = report['results']
        self.assertTrue(report['verified'])
        self.assertTrue(results['valid'])
        self.assertFalse(results['class'].is_zero)
        self.assertTrue(results['flat'])
        self.assertNotIn('isomorphic', results)


    def test_classify_a_broken_cocycle(self):
        circle = fixture('trivial', 'circle:3')
        c = global_form_cocycle('bundle', circle, SimplicialCochain(1, {circle.space.simplices(1)[0]: Fraction(1, 2)}, 'Q', circle.space))
        cell = next(cell for cell in c.cochain.entries if cell.slot == 2)
        broken = c.cochain + TripleCochain(2, {cell: Fraction(1, 5)})
        report = ClassificationFacade().run(problem(circle, 'classify', kind='bundle', cocycle=broken))
        self.assertFalse(report['verified'])
        self.assertFalse(report['results']['valid'])
        self.assertTrue(report['results']['violations'])


    def test_classify_against_another_cocycle(self):
        facade = ClassificationFacade()
        same = facade.run(problem(self.point, 'classify', kind='bundle',
                                  cocycle=character(self.point, 1).cochain, other=character(self.point, 1).cochain))
        self.assertTrue(same['results']['isomorphic'])
        self.assertIsInstance(same['results']['isomorphism'], Witness)
        different = facade.run(problem(self.point, 'classify', kind='bundle',
                                       cocycle=character(self.point, 1).cochain, other=character(self.point, 2).cochain))
        self.assertFalse(different['results']['isomorphic'])
        self.assertIsInstance(different['results']['isomorphism'], Certificate)
        self.assertTrue(different['verified'])


    def test_obstruct_an_averaged_connection(self):
        square = fixture('cyclic:2', 'circle:4', 'rotation')
        X = square.space
        form = average(square, SimplicialCochain(1, {X.simplices(1)[0]: Fraction(1, 3)}, 'Q', X))
        x = restrict_to_level_zero(global_form_cocycle('bundle', square, form))
        report = ClassificationFacade().run(problem(square, 'obstruct', kind='bundle', cocycle=x))
        self.assertTrue(report['verified'])
        self.assertTrue(report['results']['extendable'])
        self.assertIn('extension', report['results'])


    def test_twist_by_discrete_torsion(self):
        gamma = twist_values(discrete_torsion(self.klein.group), ClassCoordinates(torsion=[1]))
        report = ClassificationFacade().run(problem(self.klein, 'twist', gamma=gamma))
        results = report['results']
        self.assertTrue(results['changed'])
        self.assertEqual(results['discrete_torsion'], MixedModule(torsion=(2,)))
        self.assertIsInstance(results['isomorphism'], Certificate)


    def test_twist_orbit(self):
        report = ClassificationFacade().run(problem(self.klein, 'twist', cocycle=GeomCocycle.zero('gerbe', self.klein).cochain))
        self.assertEqual(report['results']['orbit_size'], 2)
        self.assertEqual(report['results']['bound'], settings.DELIGNE['DENOMINATOR_BOUND'])




class SelftestFacadeTests(SimpleTestCase):

    def test_quick_selftest_passes(self):
        report = SelftestFacade().selftest('quick')
        self.assertTrue(report['verified'], report['results']['failures'])
        self.assertTrue(all(outcome['passed'] for outcome in report['results']['suites']))


    def test_corrupted_sign_convention_is_caught(self):
        with override_settings(DELIGNE={**settings.DELIGNE, 'SIGN_CONVENTION': 'corrupted'}):
            report = SelftestFacade(threads=1).selftest('quick')
        self.assertFalse(report['verified'])
        self.assertIn('d_squared[cyclic:2 on circle:4 (rotation)]', report['results']['failures'])


    def test_engine_errors_become_failed_suites(self):
        def too_large(spec):
            raise ResourceLimitExceeded("8856 exceeds 6000", dimension=8856)

        def not_a_cocycle(spec):
            raise PreconditionError("Not a bundle cocycle", code='not_cocycle')

        facade = SelftestFacade(threads=1)
        for check in (too_large, not_a_cocycle):
            outcome = facade._run_suite(('oversized', ('cyclic:2', 'point', 'trivial'), check))
            self.assertFalse(outcome['passed'])
            self.assertEqual(outcome['fixture'], 'cyclic:2 on point')
        self.assertIn('8856', facade._run_suite(('oversized', ('cyclic:2', 'point', 'trivial'), too_large))['detail'])


    def test_dimension_limit_fails_the_selftest_without_raising(self):
        with override_settings(DELIGNE={**settings.DELIGNE, 'MAX_DIMENSION': 5}):
            report = SelftestFacade(threads=1).selftest('quick')
        self.assertFalse(report['verified'])
        details = [outcome['detail'] for outcome in report['results']['suites'] if not outcome['passed']]
        self.assertTrue(any(detail.startswith('ResourceLimitExceeded') for detail in details))
