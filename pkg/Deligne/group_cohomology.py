import logging
from fractions import Fraction
from dataclasses import dataclass, field
from django.core.exceptions import ValidationError
from Algebra.mixed import MixedSpace, MixedMap, MixedComplex, DirectSum, block_map
from Algebra.modules import ClassCoordinates
from Algebra.cohomology import cohomology_at, solve_mixed, NoSolution
from Algebra.exceptions import StructuralError, PreconditionError
from Simplicial.nerve import face_copy
from Deligne.assembly import ModelSpec
from Deligne.engine import assemble




logger = logging.getLogger(__name__)




def maps_equal(f, g):
    return (f + g.scaled(-1)).is_zero()




@dataclass
class GModule:

    """
    A = F / rel(R) for an injective rel: R → F of mixed spaces, with G acting by pullback:
    for every g a pair (F_g, R_g) with rel∘R_g = F_g∘rel and F_{gh} = F_h∘F_g.
    """

    group: object
    relations: MixedMap
    free_action: dict
    relation_action: dict
    name: str = ''
    checked: bool = field(default=False, repr=False)

    def __post_init__(self):
        if not self.checked:
            self.check()
            self.checked = True


    @property
    def free(self):
        return self.relations.target


    @property
    def relators(self):
        return self.relations.source


    def check(self):

        """
        Raises:
        StructuralError: if the maps do not form a right action compatible with rel.
        """

        group = self.group
        for g in group.elements:
            if not maps_equal(self.relations @ self.relation_action[g], self.free_action[g] @ self.relations):
                raise StructuralError(f"Action of {group.labels[g]} does not preserve the relations of {self.name}")
        if not maps_equal(self.free_action[group.identity], MixedMap.identity(self.free)):
            raise StructuralError(f"The identity acts nontrivially on {self.name}")
        for g in group.elements:
            for h in group.elements:
                if not maps_equal(self.free_action[group.mul(g, h)], self.free_action[h] @ self.free_action[g]):
                    raise StructuralError(
                        f"{self.name}: ({group.labels[g]}{group.labels[h]})^* ≠ "
                        f"{group.labels[h]}^*{group.labels[g]}^*"
                    )
        return True


    def as_complex(self):

        """ The cone [R → F] in degrees -1, 0 with its action maps; H^0 is A. """

        complex_ = MixedComplex({-1: self.relators, 0: self.free}, {-1: self.relations})
        action = {g: {-1: self.relation_action[g], 0: self.free_action[g]} for g in self.group.elements}
        return complex_, action


    def __str__(self):
        return self.name




def trivial_module(group, kind):

    """ Z, Q, Q/Z or Z/n with the trivial action. """

    if kind == 'Z':
        free, relators, columns = MixedSpace(1, 0), MixedSpace(0, 0), {}
    elif kind == 'Q':
        free, relators, columns = MixedSpace(0, 1), MixedSpace(0, 0), {}
    elif kind == 'Q/Z':
        free, relators, columns = MixedSpace(0, 1), MixedSpace(1, 0), {0: {0: Fraction(1)}}
    elif kind.startswith('Z/') and kind[2:].isdigit() and int(kind[2:]) > 0:
        free, relators, columns = MixedSpace(1, 0), MixedSpace(1, 0), {0: {0: int(kind[2:])}}
    else:
        raise ValidationError(f"Unknown coefficient module {kind!r}", code='preset')
    relations = MixedMap(relators, free, columns)
    return GModule(
        group,
        relations,
        {g: MixedMap.identity(free) for g in group.elements},
        {g: MixedMap.identity(relators) for g in group.elements},
        name=kind,
    )


def permutation_module(group, ring='Q'):

    """
    ring[G] with g^* e_h = e_{g⁻¹h}. For Z/2 this is the swap of two coordinates.
    """

    n = group.order
    free = MixedSpace(n, 0) if ring == 'Z' else MixedSpace(0, n)
    unit = 1 if ring == 'Z' else Fraction(1)
    action = {
        g: MixedMap(free, free, {h: {group.mul(group.inv(g), h): unit} for h in group.elements})
        for g in group.elements
    }
    relators = MixedSpace(0, 0)
    return GModule(
        group,
        MixedMap.zero(relators, free),
        action,
        {g: MixedMap.identity(relators) for g in group.elements},
        name=f"{ring}[{group.name}]",
    )


def module_preset(group, name):

    """ 'Z', 'Q', 'Q/Z', 'Z/n', 'permutation:Z' or 'permutation:Q'. """

    if name.startswith('permutation:'):
        ring = name.partition(':')[2]
        if ring not in ('Z', 'Q'):
            raise ValidationError(f"Permutation modules are over Z or Q, not {ring!r}", code='preset')
        return permutation_module(group, ring)
    return trivial_module(group, name)




@dataclass
class BarLayout:

    """ Summands (p, copy, q) of one total degree of a bar double complex. """

    blocks: list
    sum: DirectSum

    def index(self):
        return {block: k for k, block in enumerate(self.blocks)}




def _layout(group, complex_, n):
    blocks = []
    for p in range(0, n - complex_.lo + 1):
        q = n - p
        if q > complex_.hi:
            continue
        blocks.extend((p, copy, q) for copy in group.tuples(p))
    return BarLayout(blocks, DirectSum([complex_.space(q) for _, _, q in blocks]))


def bar_double_complex(group, complex_, action, lo, hi):

    """
    Tot^n = ⊕_{p+q=n} ⊕_{G^p} K^q with D = ∂ + (-1)^p d_K, where

        (∂f)(g_1, ..., g_{p+1}) = Σ_{l<p+1} (-1)^l f(∂_l ĝ) + (-1)^{p+1} g_{p+1}^* f(g_1, ..., g_p).

    `action[g][q]` is the pullback g^* on K^q; the maps must be chain maps forming a right
    action. Returns the MixedComplex in degrees lo..hi and the layout of every degree.
    """

    layouts = {n: _layout(group, complex_, n) for n in range(lo, hi + 1)}
    differentials = {}
    for n in range(lo, hi):
        source, target = layouts[n], layouts[n + 1]
        position = source.index()
        blocks = {}

        def add(t, s, f):
            blocks[(t, s)] = f if (t, s) not in blocks else blocks[(t, s)] + f

        for t, (p_plus, copy, q) in enumerate(target.blocks):
            if p_plus == 0:
                continue
            for l in range(p_plus + 1):
                s = position.get((p_plus - 1, face_copy(group, copy, l), q))
                if s is None:
                    continue
                f = action[copy[-1]][q] if l == p_plus else MixedMap.identity(complex_.space(q))
                add(t, s, f.scaled(-1) if l % 2 else f)
        target_position = target.index()
        for s, (p, copy, q) in enumerate(source.blocks):
            t = target_position.get((p, copy, q + 1))
            if t is None:
                continue
            d = complex_.differential(q)
            add(t, s, d.scaled(-1) if p % 2 else d)
        differentials[n] = block_map(source.sum, target.sum, blocks)
    spaces = {n: layout.sum.space for n, layout in layouts.items()}
    return MixedComplex(spaces, differentials), layouts




@dataclass
class GroupCohomology:
    degree: int
    module: object
    coefficients: object
    cohomology: object = field(repr=False)
    layouts: dict = field(repr=False)
    complex_: object = field(repr=False)

    def cochain(self, values, relator_values=None):

        """
        Vector of Tot^p from a group cochain {copy: F-vector} and, for presented modules,
        the relator part {copy of length p+1: R-vector}.
        """

        layout = self.layouts[self.degree]
        index = layout.index()
        vector = {}
        for copy, value in values.items():
            vector.update(layout.sum.embed(index[(self.degree, tuple(copy), 0)], value))
        for copy, value in (relator_values or {}).items():
            vector.update(layout.sum.embed(index[(self.degree + 1, tuple(copy), -1)], value))
        return vector


    def decode(self, vector):
        if self.complex_.differential(self.degree).apply(vector):
            raise PreconditionError("Not a group cocycle", code='not_cocycle')
        return self.cohomology.decode(vector)




def bar_cohomology(module, p):

    """ H^p(G; A) with its decoding data. """

    if p < 0:
        raise StructuralError(f"Negative group cohomology degree {p}")
    complex_, action = module.as_complex()
    total, layouts = bar_double_complex(module.group, complex_, action, p - 1, p + 1)
    group = cohomology_at(total, p)
    logger.debug(f"H^{p}({module.group.name}; {module.name}) = {group.module}")
    return GroupCohomology(p, group.module, module, group, layouts, total)


def group_cohomology(module, p):
    return bar_cohomology(module, p).module




def divisible_cocycle(group, values):

    """
    A Q/Z-valued group cochain given by rational lifts {copy: x}, completed with its integral
    coboundary on the relator part so that it lives in the bar complex of [Z → Q].
    The cochain is a cocycle exactly when that coboundary is integral.

    Raises:
    PreconditionError: if ∂x is not integral.
    """

    p = len(next(iter(values))) if values else 0
    module = trivial_module(group, 'Q/Z')
    data = bar_cohomology(module, p)
    lifts = {tuple(copy): Fraction(x) for copy, x in values.items()}
    relators = {}
    for copy in group.tuples(p + 1):
        total = Fraction(0)
        for l in range(p + 2):
            total += (-1) ** l * lifts.get(face_copy(group, copy, l), Fraction(0))
        if total.denominator != 1:
            raise PreconditionError(f"Not a Q/Z-valued cocycle at {copy}", code='not_cocycle')
        if total:
            relators[copy] = {0: (-1) ** p * int(total)}
    vector = data.cochain({copy: {0: x} for copy, x in lifts.items() if x}, relators)
    return data, vector




def coefficient_module(action, N, q):

    """
    H^q(M, F̄(N)) as a G-module, read off the level-0 Čech-Deligne column: a presentation
    F = Z^{a+t} ⊕ Q^{b+c}, R = Z^{t+c} of Z^a ⊕ Q^b ⊕ (Q/Z)^c ⊕ ⊕ Z/d_i, with the pullback
    by g lifted to F through unreduced class coordinates.

    Raises:
    StructuralError: if the lifted maps fail to form a strict action.
    """

    assembly = assemble(ModelSpec(action, N, (q, q)))
    column, _ = assembly.column_complex(0, (), q, q + 2)
    cohomology = cohomology_at(column, q + 1)
    quotient = cohomology.subquotient
    module = quotient.module
    a, b, c, t = module.rank_z, module.rank_q, module.rank_qz, len(module.torsion)
    free = MixedSpace(a + t, b + c)
    relators = MixedSpace(t + c, 0)
    relation_columns = {i: {a + i: d} for i, d in enumerate(module.torsion)}
    relation_columns.update({t + k: {free.nZ + b + k: Fraction(1)} for k in range(c)})
    relations = MixedMap(relators, free, relation_columns)

    def coordinates(vector):
        return ClassCoordinates(
            free=[vector.get(k, 0) for k in range(a)],
            rational=[Fraction(vector.get(free.nZ + k, 0)) for k in range(b)],
            divisible_raw=[Fraction(vector.get(free.nZ + b + k, 0)) for k in range(c)],
            torsion=[vector.get(a + i, 0) for i in range(t)],
        )

    def vector(coords):
        out = {}
        for k, x in enumerate(coords.free):
            out[k] = x
        for i, x in enumerate(coords.torsion):
            out[a + i] = x
        for k, x in enumerate(coords.rational):
            out[free.nZ + k] = Fraction(x)
        for k, x in enumerate(coords.divisible_raw):
            out[free.nZ + b + k] = Fraction(x)
        return {k: v for k, v in out.items() if v}

    free_action, relation_action = {}, {}
    for g in action.group.elements:
        pullback = assembly.translation(g, q + 1)
        columns = {}
        for j in range(free.dim):
            image = pullback.apply(quotient.lift(coordinates(free.unit(j))))
            columns[j] = vector(quotient.decode(image, reduce=False))
        F_g = MixedMap(free, free, columns)
        R_columns = {}
        for j in range(relators.dim):
            solution = solve_mixed(relations, F_g.apply(relations.column(j)))
            if isinstance(solution, NoSolution):
                raise StructuralError(f"Pullback by {action.group.labels[g]} does not preserve the relations")
            R_columns[j] = solution
        free_action[g] = F_g
        relation_action[g] = MixedMap(relators, relators, R_columns)
    return GModule(action.group, relations, free_action, relation_action, name=f"H^{q}(M, F̄({N}))")
