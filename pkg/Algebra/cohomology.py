import logging
from fractions import Fraction
from dataclasses import dataclass, field
from Algebra.modules import Subquotient
from Algebra.mixed import MixedSubgroup, normalize
from Algebra.exceptions import StructuralError, PreconditionError
from Algebra.elimination import (
    RationalEchelon, IntegerEchelon, axpy, scale, denominator_lcm, leading, default_strategy,
)




logger = logging.getLogger(__name__)




class _LatticeSystem:

    """
    Reduces f = [[A, 0], [C, D]] to an integer system in the Z-source variables.

    With E an echelon basis of im D and res() the residual modulo E, f(x1, x2) = (y1, y2)
    is solvable iff Σ x1_j·K_j = (y1, res(y2)) where K_j = (A_j, res(C_j)); everything on
    the right is scaled by the lcm of the denominators of the res(C_j).
    """

    def __init__(self, f, strategy):
        self.f = f
        self.strategy = strategy
        source, self.target = f.source, f.target
        self.image = RationalEchelon(strategy, track=True)
        for j in source.q_coordinates():
            self.image.add(f.column(j), j)
        transformed = [self._transform(f.column(j)) for j in source.z_coordinates()]
        self.scale = denominator_lcm(transformed)
        self.columns = [scale(k, self.scale) for k in transformed]


    def _transform(self, vector):
        nZ = self.target.nZ
        out = {k: v for k, v in vector.items() if k < nZ}
        out.update(self.image.residual({k: v for k, v in vector.items() if k >= nZ}))
        return out


    def transform(self, vector):
        return scale(self._transform(vector), self.scale)


    def complete(self, x1, y=None):

        """ Given integral x1 with f(x1, 0) ≡ y modulo im D, finds the rational x2. """

        rest = self.f.apply(x1)
        rest = {k: -v for k, v in rest.items()}
        if y:
            axpy(rest, 1, y)
        rest = {k: v for k, v in rest.items() if k >= self.target.nZ}
        x2 = self.image.express(rest)
        if x2 is None:
            raise StructuralError("Integral part does not complete to a solution")
        out = dict(x1)
        out.update(x2)
        return normalize(out, self.f.source)




def kernel(f, strategy=None):

    """
    ker f as a MixedSubgroup: ker D as rational generators plus, for every element x1 of a
    Z-basis of the integral relation lattice, the completed (x1, x2).
    """

    strategy = strategy or default_strategy()
    system = _LatticeSystem(f, strategy)
    q_gens = tuple(normalize(dict(r), f.source) for r in system.image.relations if r)

    lattice = IntegerEchelon(strategy, track=True)
    z_sources = list(f.source.z_coordinates())
    lattice.extend(system.columns, z_sources)
    z_gens = tuple(system.complete(dict(relation)) for relation in lattice.relations if relation)
    return MixedSubgroup(f.source, z_gens, q_gens)




def image(f):
    z_gens = tuple(c for j in f.source.z_coordinates() if (c := f.column(j)))
    q_gens = tuple(c for j in f.source.q_coordinates() if (c := f.column(j)))
    return MixedSubgroup(f.target, z_gens, q_gens)




@dataclass
class NoSolution:

    """
    Proof that f(x) = y has no solution: a functional φ on the target (sparse dict) with
    φ∘f integral on every Z-coordinate, zero on every Q-coordinate of the source and
    φ(y) = value not an integer. `reason` is 'lattice' or 'rank'.
    """

    functional: dict
    value: Fraction
    reason: str

    def evaluate(self, vector):
        return sum((Fraction(c) * vector.get(k, 0) for k, c in self.functional.items()), Fraction(0))


    def verify(self, f, y):
        if self.evaluate(y) != self.value or self.value.denominator == 1:
            return False
        for j in f.source.z_coordinates():
            if self.evaluate(f.column(j)).denominator != 1:
                return False
        return all(self.evaluate(f.column(j)) == 0 for j in f.source.q_coordinates())


    def __bool__(self):
        return False




def _dual_functional(lattice, target_vector, strategy):

    """
    ψ with ψ(b_k) = δ_{k,k0} on the echelon rows b_k, where k0 is a row on which the
    target vector has a non-integral coordinate. ψ only reads pivot columns.
    """

    coordinates = lattice.rational_coordinates(target_vector)
    k0 = next(p for p in lattice.pivots if Fraction(coordinates.get(p, 0)).denominator != 1)
    order = lattice.pivots
    psi = {}
    for p in reversed(order):
        row = lattice.rows[p]
        total = Fraction(1 if p == k0 else 0)
        for q, value in psi.items():
            total -= value * row.get(q, 0)
        psi[p] = total / row[p]
    return {k: v for k, v in psi.items() if v}, coordinates[k0]


def _pull_back(system, psi):
    out = {}
    for i in range(system.target.dim):
        value = sum((c * v for k, v in system.transform({i: 1}).items() if (c := psi.get(k))), Fraction(0))
        if value:
            out[i] = value
    return out




def solve_mixed(f, y, strategy=None):

    """
    Solves f(x) = y with x integral on the source Z-block.

    Returns:
    the solution as a sparse vector, or a NoSolution certificate.

    Raises:
    StructuralError: if y does not belong to the target space.
    """

    strategy = strategy or default_strategy()
    f.target.validate(y, 'right-hand side')
    system = _LatticeSystem(f, strategy)
    target = system.transform(y)

    lattice = IntegerEchelon(strategy, track=True)
    z_sources = list(f.source.z_coordinates())
    lattice.extend(system.columns, z_sources)

    combination = None
    if all(Fraction(v).denominator == 1 for v in target.values()):
        combination = lattice.express(target)
    if combination is not None:
        return system.complete({j: c for j, c in combination.items() if c}, y)

    rational = RationalEchelon(strategy).extend(system.columns)
    residual = rational.residual(target)
    if residual:
        pivot = leading(residual, strategy)
        factor = 1 / (2 * residual[pivot])
        functional = {}
        for i in range(f.target.dim):
            value = rational.residual(system.transform({i: 1})).get(pivot, 0) * factor
            if value:
                functional[i] = value
        certificate = NoSolution(functional, Fraction(1, 2), 'rank')
    else:
        psi, value = _dual_functional(lattice, target, strategy)
        certificate = NoSolution(_pull_back(system, psi), Fraction(value), 'lattice')
    logger.debug(f"No solution ({certificate.reason}); certificate value {certificate.value}")
    return certificate




@dataclass
class CohomologyGroup:

    """
    H^n of a MixedComplex: canonical module, named generators with representative cocycles,
    and the subquotient that decodes arbitrary cocycles.
    """

    degree: int
    module: object
    generators: list
    representatives: list
    subquotient: Subquotient = field(repr=False)

    def decode(self, cocycle):
        return self.subquotient.decode(cocycle)


    def lift(self, coordinates):
        return self.subquotient.lift(coordinates)




def cohomology_at(complex_, n, strategy=None):

    """
    Raises:
    StructuralError: if n is outside the degrees of the complex.
    """

    if not complex_.lo <= n <= complex_.hi:
        raise StructuralError(f"Degree {n} outside [{complex_.lo}, {complex_.hi}]")
    strategy = strategy or default_strategy()
    cycles = kernel(complex_.differential(n), strategy)
    boundaries = image(complex_.differential(n - 1))
    subquotient = Subquotient(cycles, boundaries, strategy)
    return CohomologyGroup(
        degree=n,
        module=subquotient.module,
        generators=subquotient.generators,
        representatives=subquotient.representatives(),
        subquotient=subquotient,
    )




@dataclass
class Witness:
    cochain: dict

    def __bool__(self):
        return True




@dataclass
class Certificate:

    """ z is not a coboundary: its decode has `coefficient` on `generator`. """

    generator: str
    coefficient: object
    coordinates: object = None

    def __bool__(self):
        return False




def is_coboundary(complex_, n, z, group=None, strategy=None):

    """
    Decides whether the cocycle z of degree n is a coboundary.

    Returns:
    Witness(x) with d x = z, or a Certificate naming a generator on which z is nonzero.

    Raises:
    PreconditionError: if d z ≠ 0.
    """

    z = normalize(z, complex_.space(n))
    if complex_.differential(n).apply(z):
        raise PreconditionError("Not a cocycle", code='not_cocycle')
    group = group or cohomology_at(complex_, n, strategy)
    coordinates = group.decode(z)
    nonzero = coordinates.nonzero(group.generators)
    if nonzero:
        generator, value = nonzero[0]
        return Certificate(generator.name, value, coordinates)
    x = solve_mixed(complex_.differential(n - 1), z, strategy)
    if isinstance(x, NoSolution):
        raise StructuralError("Decode vanished but no primitive exists")
    return Witness(x)
