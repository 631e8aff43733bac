import logging
from fractions import Fraction
from django.core.exceptions import ValidationError
from Algebra.modules import MixedModule
from Algebra.cohomology import Witness, Certificate
from Algebra.exceptions import StructuralError, ResourceLimitExceeded
from Simplicial.nerve import check_relations
from Simplicial.cochains import SimplicialCochain, cycle_basis, is_acyclic
from Simplicial.presets import fixture
from Deligne.assembly import ModelSpec
from Deligne.engine import assemble, equivariant_deligne, CONVENTIONS
from Deligne.spectral import spectral_sequence
from Deligne.sequences import verify_exact_sequence
from Deligne.invariants import realize_curvature, curvature
from Geometry.cocycles import GeomCocycle
from Geometry.twists import twist_orbit, discrete_torsion
from Geometry.enumeration import enumerate_bounded_cocycles, partition_by_class
from Facades.base_facade import BaseFacade







logger = logging.getLogger(__name__)

RELATION_FIXTURES = (('cyclic:2', 'circle:4', 'rotation'), ('cyclic:3', 'point', 'trivial'), ('klein4', 'point', 'trivial'))



def _expect(actual, expected, what):
    if actual != expected:
        raise AssertionError(f"{what}: expected {expected}, got {actual}")
    return f"{what} = {actual}"


def _name(spec):
    group, space, action = spec
    return f"{group} on {space}" + (f" ({action})" if action != 'trivial' else '')




def simplicial_identities(spec):
    counts = check_relations(fixture(*spec), max_level=4)
    return f"{sum(counts.values())} relations"


def d_squared(spec):
    assembly = assemble(ModelSpec(fixture(*spec), 1, (0, 2)))
    complex_ = assembly.to_mixed_complex(0, 4)
    return f"D∘D = 0 in degrees 0..4, dims {complex_.dims()}"


def acyclic_stars(spec):
    space = fixture(*spec).space
    for v in range(space.n_vertices):
        if not is_acyclic(space.closed_star((v,))):
            raise AssertionError(f"closed star of {space.labels[v]} is not acyclic")
    return f"{space.n_vertices} closed stars acyclic"


def cyclic_classification(spec):
    n = fixture(*spec).group.order
    return _expect(equivariant_deligne(fixture(*spec), 1, 1).group, MixedModule(torsion=(n,)), "H^1(F̄(1))")


def trivial_group_circle(spec):
    return _expect(equivariant_deligne(fixture(*spec), 1, 1).group, MixedModule(rank_qz=1), "H^1(F̄(1))")


def spectral_consistency(spec):
    sequence = spectral_sequence(fixture(*spec), 1, 2, (0, 2))
    failing = [m for m in range(0, 3) if not sequence.is_consistent(m)]
    if failing:
        raise AssertionError(f"E_∞ disagrees with H^m for m in {failing}")
    return _expect(sequence.page(2).entry(1, 0), MixedModule(torsion=(fixture(*spec).group.order,)), "E_2^{1,0}")


def discrete_torsion_twist(spec):
    action = fixture(*spec)
    _expect(discrete_torsion(action.group).module, MixedModule(torsion=(2,)), "H^2(G; Q/Z)")
    return _expect(len(twist_orbit(action, GeomCocycle.zero('gerbe', action), 1)), 2, "twist orbit size")


def octahedron_degrees(spec):
    action = fixture(*spec)
    _expect(equivariant_deligne(action, 2, 2).group, MixedModule(rank_qz=1), "H^2(F̄(2))")
    return _expect(equivariant_deligne(action, 1, 2).group, MixedModule(), "H^2(F̄(1))")


def free_quotient_sequence(spec):
    report = verify_exact_sequence(fixture(*spec), 1, 'equivariant_cohomology', (2, 2))
    if not report.exact:
        raise AssertionError(f"identifications fail: {report.failures()}")
    return f"{len(report.identifications)} identifications"


def bounded_enumeration(spec):
    action = fixture(*spec)
    classes = partition_by_class('bundle', action, enumerate_bounded_cocycles('bundle', action, 8))
    return _expect(len(classes), action.group.order, "classes at denominator bound 8")


def three_curvature_period(spec):
    action = fixture(*spec)
    X = action.space
    form = SimplicialCochain(3, {X.simplices(3)[0]: 1}, 'Q', X)
    verdict = realize_curvature(action, 2, form)
    if not isinstance(verdict, Witness):
        raise AssertionError("the period-1 form is not a 3-curvature")
    realized = curvature(action, 2, verdict.cochain)
    _expect(abs(realized.pairing(cycle_basis(X, 3)[0])), 1, "period")
    half = SimplicialCochain(3, {X.simplices(3)[0]: Fraction(1, 2)}, 'Q', X)
    if not isinstance(realize_curvature(action, 2, half), Certificate):
        raise AssertionError("a half period was realized")
    return "period 1 realized, period 1/2 certified"


QUICK = (
    [('simplicial_identities', spec, simplicial_identities) for spec in RELATION_FIXTURES]
    + [('d_squared', spec, d_squared) for spec in RELATION_FIXTURES]
    + [
        ('acyclic_stars', ('trivial', 'circle:4', 'trivial'), acyclic_stars),
        ('acyclic_stars', ('trivial', 'sphere:octahedron', 'trivial'), acyclic_stars),
        ('trivial_group', ('trivial', 'circle:3', 'trivial'), trivial_group_circle),
        ('spectral_consistency', ('cyclic:2', 'point', 'trivial'), spectral_consistency),
        ('discrete_torsion', ('klein4', 'point', 'trivial'), discrete_torsion_twist),
    ]
    + [('classification', (f"cyclic:{n}", 'point', 'trivial'), cyclic_classification) for n in (2, 3, 4)]
)

FULL = QUICK + [
    ('manifold_degrees', ('trivial', 'sphere:octahedron', 'trivial'), octahedron_degrees),
    ('free_quotient', ('cyclic:2', 'circle:4', 'rotation'), free_quotient_sequence),
    ('bounded_enumeration', ('cyclic:2', 'point', 'trivial'), bounded_enumeration),
    ('bounded_enumeration', ('cyclic:3', 'point', 'trivial'), bounded_enumeration),
    ('bounded_enumeration', ('cyclic:4', 'point', 'trivial'), bounded_enumeration),
    ('three_curvature', ('trivial', 'sphere:boundary4simplex', 'trivial'), three_curvature_period),
]



class SelftestFacade(BaseFacade):

    """ Runs the acceptance suites on the built-in fixtures, quick or full. """

    tasks = ('selftest',)


    def selftest(self, level='quick'):

        """
        Args:
            level (str): 'quick' or 'full'.

        Returns:
            dict: report with one entry per suite and fixture; `verified` when all pass.
        """

        suites = FULL if level == 'full' else QUICK
        logger.info(f"Starting {level} selftest with {len(suites)} suites")
        outcomes = self.parallel(self._run_suite, suites)
        failures = [f"{o['suite']}[{o['fixture']}]" for o in outcomes if not o['passed']]
        for failure in failures:
            logger.error(f"Selftest failure: {failure}")
        logger.info(f"Finished {level} selftest: {len(outcomes) - len(failures)}/{len(outcomes)} passed")
        return {
            'task': 'selftest',
            'results': {'level': level, 'suites': outcomes, 'failures': failures},
            'conventions': dict(CONVENTIONS),
            'timing': {},
            'verified': not failures,
        }


    def _run_suite(self, suite):
        name, spec, check = suite
        try:
            detail = check(spec)
            passed = True
        except AssertionError as e:
            detail, passed = str(e), False
        except ValidationError as e:
            detail, passed = ' '.join(e.messages), False
        except StructuralError as e:
            detail, passed = f"{type(e).__name__}: {e}", False
        except ResourceLimitExceeded as e:
            detail, passed = f"{type(e).__name__} at dimension {e.dimension}: {e}", False
        logger.debug(f"{name}[{_name(spec)}]: {'pass' if passed else 'FAIL'} {detail}")
        return {'suite': name, 'fixture': _name(spec), 'passed': passed, 'detail': detail}
