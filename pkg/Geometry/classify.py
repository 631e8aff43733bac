import logging
from dataclasses import dataclass, field
from Algebra.exceptions import PreconditionError, StructuralError
from Simplicial.cochains import is_integral_closed
from Deligne.assembly import ModelSpec
from Deligne.engine import assemble, equivariant_deligne
from Deligne.invariants import curvature, is_invariant
from Geometry.cocycles import GeomCocycle, violation_name




logger = logging.getLogger(__name__)




@dataclass
class ValidationOutcome:

    """ `violations` lists {condition, component, cells, example} for every failing part of D(c). """

    kind: str
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations


    def conditions(self):
        return sorted({v['condition'] for v in self.violations})




@dataclass
class ClassHandle:

    """ A decoded class of H^N(G^•×M, F̄(N)): the group, its generators and the coordinates. """

    group: object
    generators: list
    coordinates: object

    @property
    def is_zero(self):
        return self.coordinates.is_zero


    def values(self):
        return self.coordinates.values()


    def as_dict(self):
        return {
            'group': str(self.group),
            'coordinates': {g.name: str(v) for g, v in zip(self.generators, self.coordinates.values())},
        }


    def __eq__(self, other):
        return isinstance(other, ClassHandle) and str(self.group) == str(other.group) and self.values() == other.values()


    def __hash__(self):
        return hash((str(self.group), tuple(self.values())))




@dataclass
class FlatnessOutcome:
    flat: bool
    curvature: object




class GeometricClassifier:

    """
    Validation, classification, isomorphism and curvature of bundle or gerbe cocycles, all
    computed in the Z(N+1)-model of H^N(G^•×M, F̄(N)).
    """

    def __init__(self, action, kind):
        self.action = action
        self.kind = kind
        self.N = GeomCocycle.zero(kind, action).N
        self._result = None


    @property
    def result(self):
        if self._result is None:
            self._result = equivariant_deligne(self.action, self.N, self.N)
        return self._result


    def _check_kind(self, cocycle):
        if cocycle.kind != self.kind:
            raise PreconditionError(f"Expected a {self.kind} cocycle, got a {cocycle.kind}", code='degree')


    def validate(self, cocycle, N=None):
        self._check_kind(cocycle)
        N = self.N if N is None else N
        assembly = assemble(ModelSpec(self.action, N, (self.N, self.N)))
        boundary = assembly.apply_D(cocycle.cochain)
        grouped = {}
        for cell, value in sorted(boundary.entries.items(), key=lambda item: repr(item[0])):
            grouped.setdefault((cell.level, len(cell.index) - 1, cell.slot), []).append(cell)
        outcome = ValidationOutcome(self.kind)
        for (level, j, slot), cells in sorted(grouped.items()):
            outcome.violations.append({
                'condition': violation_name(level, slot, N),
                'component': f"({level},{j},{slot})",
                'cells': len(cells),
                'example': str(tuple(cells[0])),
            })
        if outcome.violations:
            logger.info(f"Invalid {self.kind} cocycle: {outcome.conditions()}")
        return outcome


    def require_valid(self, cocycle):
        outcome = self.validate(cocycle)
        if not outcome.ok:
            raise PreconditionError(
                f"Not a {self.kind} cocycle: {', '.join(outcome.conditions())} fails", code='not_cocycle'
            )


    def classify(self, cocycle):
        self.require_valid(cocycle)
        result = self.result
        return ClassHandle(result.group, result.generators, result.decode(cocycle.cochain))


    def representative(self, handle):

        """ The stored representative of a class handle. """

        return GeomCocycle(self.kind, self.action, self.result.lift(handle.coordinates))


    def isomorphic(self, first, second):

        """
        Returns:
        Witness whose cochain x has D x = first - second, or a Certificate naming a generator.
        """

        self.require_valid(first)
        self.require_valid(second)
        return self.result.is_coboundary((first - second).cochain)


    def curvature(self, cocycle):
        self.require_valid(cocycle)
        return curvature(self.action, self.N, cocycle.cochain)


    def flat_test(self, cocycle):

        """ A cocycle is flat when it is also a cocycle of the Z(N+2)-model, i.e. its curvature vanishes. """

        form = self.curvature(cocycle)
        flat = self.validate(cocycle, self.N + 1).ok
        if flat != form.is_zero():
            raise StructuralError(f"Flat test of a {self.kind} disagrees with its curvature")
        return FlatnessOutcome(flat, form)




def validate_bundle_cocycle(action, cocycle):
    return GeometricClassifier(action, 'bundle').validate(cocycle)


def bundle_class(action, cocycle):
    return GeometricClassifier(action, 'bundle').classify(cocycle)


def bundles_isomorphic(action, first, second):
    return GeometricClassifier(action, 'bundle').isomorphic(first, second)


def bundle_curvature(action, cocycle):
    return GeometricClassifier(action, 'bundle').curvature(cocycle)


def bundle_flat_test(action, cocycle):
    return GeometricClassifier(action, 'bundle').flat_test(cocycle)


def validate_gerbe_cocycle(action, cocycle):
    return GeometricClassifier(action, 'gerbe').validate(cocycle)


def gerbe_class(action, cocycle):
    return GeometricClassifier(action, 'gerbe').classify(cocycle)


def gerbes_isomorphic(action, first, second):
    return GeometricClassifier(action, 'gerbe').isomorphic(first, second)


def gerbe_flat_test(action, cocycle):
    return GeometricClassifier(action, 'gerbe').flat_test(cocycle)


def three_curvature(action, cocycle):

    """
    The 3-curvature of a gerbe: closed, G-invariant, with integral periods.

    Raises:
    PreconditionError: if the cocycle is invalid.
    StructuralError: if the computed form is not G-invariant, not closed or has a
    non-integral period.
    """

    form = GeometricClassifier(action, 'gerbe').curvature(cocycle)
    if form.is_zero():
        return form
    if not is_invariant(action, form):
        raise StructuralError("3-curvature is not G-invariant")
    if not form.coboundary().is_zero():
        raise StructuralError("3-curvature is not closed")
    if not is_integral_closed(form, action.space):
        raise StructuralError("3-curvature has a non-integral period")
    return form
