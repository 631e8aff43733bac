import logging
from fractions import Fraction
from django.conf import settings
from Algebra.cohomology import NoSolution
from Algebra.exceptions import PreconditionError, ResourceLimitExceeded
from Deligne.assembly import ModelSpec, TripleCochain
from Deligne.engine import assemble
from Geometry.cocycles import GeomCocycle, KINDS, complete_cocycle
from Geometry.classify import GeometricClassifier




logger = logging.getLogger(__name__)

MAX_ASSIGNMENTS = 50000




def farey_values(bound):

    """ Rationals in [0, 1) with denominator at most `bound`, ascending. """

    return sorted({Fraction(k, d) for d in range(1, bound + 1) for k in range(d)})




def _conditions(assembly, N, rational):

    """
    For each position k of `rational`, the rows of D whose last rational input is k. A row
    on slot 1 must be integral (an integer witness fills it through Z → Q); a row on a
    higher slot must vanish.
    """

    rows = {}
    for k, cell in enumerate(rational):
        for target, coefficient in assembly.apply_D(TripleCochain(N + 1, {cell: 1})).entries.items():
            rows.setdefault(target, {})[k] = coefficient
    conditions = [[] for _ in rational]
    for target, row in rows.items():
        conditions[max(row)].append((target.slot, row))
    return conditions


def _holds(slot, row, chosen):
    total = sum((coefficient * chosen[k] for k, coefficient in row.items()), Fraction(0))
    return total.denominator == 1 if slot == 1 else total == 0


def _assignments(values, conditions):
    chosen = []

    def extend(k):
        if k == len(conditions):
            yield tuple(chosen)
            return
        for value in values:
            chosen.append(value)
            if all(_holds(slot, row, chosen) for slot, row in conditions[k]):
                yield from extend(k + 1)
            chosen.pop()

    yield from extend(0)




def enumerate_bounded_cocycles(kind, action, bound=None):

    """
    Every cocycle on a point whose rational coordinates lie in farey_values(bound), the
    integer witnesses solved for. Coordinates are assigned one at a time and a partial
    assignment is dropped as soon as a row of D it completes cannot be cancelled by integer
    witnesses; only the survivors are completed exactly.

    Raises:
    PreconditionError: if M is not a point.
    ResourceLimitExceeded: if more than MAX_ASSIGNMENTS assignments survive.
    """

    if action.space.n_vertices != 1:
        raise PreconditionError("Bounded enumeration runs on point fixtures only", code='degree')
    bound = bound or settings.DELIGNE.get('DENOMINATOR_BOUND', 8)
    N = KINDS[kind][0]
    assembly = assemble(ModelSpec(action, N, (N, N)))
    rational = [cell for cell in assembly.space(N + 1).labels if cell.slot]
    conditions = _conditions(assembly, N, rational)
    logger.debug(f"Enumerating {kind} assignments of {len(rational)} coordinates at denominator bound {bound}")

    for count, choice in enumerate(_assignments(farey_values(bound), conditions), 1):
        if count > MAX_ASSIGNMENTS:
            raise ResourceLimitExceeded(f"More than {MAX_ASSIGNMENTS} assignments survive", dimension=count)
        partial = TripleCochain(N + 1, dict(zip(rational, choice)))
        completed = complete_cocycle(assembly, partial, lambda cell: cell.slot == 0)
        if not isinstance(completed, NoSolution):
            yield GeomCocycle(kind, action, completed)




def partition_by_class(kind, action, cocycles):

    """ {ClassHandle: [cocycles]} for an iterable of cocycles. """

    classifier = GeometricClassifier(action, kind)
    classes = {}
    for cocycle in cocycles:
        classes.setdefault(classifier.classify(cocycle), []).append(cocycle)
    return classes
