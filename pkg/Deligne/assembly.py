import logging
from fractions import Fraction
from collections import namedtuple
from dataclasses import dataclass
from django.conf import settings
from Algebra.elimination import axpy
from Algebra.mixed import MixedSpace, MixedMap, MixedComplex, sub_space
from Algebra.exceptions import StructuralError, ResourceLimitExceeded
from Simplicial.cochains import permutation_sign
from Simplicial.covers import cover_for
from Simplicial.nerve import face_copy




logger = logging.getLogger(__name__)


# One coordinate of the triple complex. slot 0 carries an integer constant on the patch
# (simplex is ()); slot k ≥ 1 carries the value of a rational (k-1)-cochain on `simplex`.
Cell = namedtuple('Cell', 'level copy index slot simplex')




@dataclass(frozen=True)
class ModelSpec:

    """
    The Z(N+1)-model of F̄(N) on G^•×M for the Deligne degrees m_lo..m_hi.

    H^m(G^•×M, F̄(N)) is H^{m+1} of the total complex; the total complex is assembled in
    degrees m_lo..truncation, and truncation ≥ m_hi + 2 keeps every differential touching
    degree m_hi + 1 exact. `top_slot` defaults to N + 1; raising it extends the coefficient
    complex by higher forms.
    """

    action: object
    N: int
    window: tuple = (0, 0)
    truncation: int = None
    cover: str = None
    top_slot: int = None

    def __post_init__(self):
        m_lo, m_hi = self.window
        if self.N < 0:
            raise StructuralError(f"Deligne weight must be non-negative, got {self.N}")
        if m_lo > m_hi or m_lo < 0:
            raise StructuralError(f"Empty or negative window {self.window}")
        if self.truncation is None:
            object.__setattr__(self, 'truncation', m_hi + 2)
        if self.truncation < m_hi + 2:
            raise StructuralError(f"Window {self.window} exceeds truncation {self.truncation}")
        if self.top_slot is None:
            object.__setattr__(self, 'top_slot', self.N + 1)
        if self.top_slot < self.N + 1:
            raise StructuralError(f"Top slot {self.top_slot} below N + 1 = {self.N + 1}")
        object.__setattr__(self, 'cover', self.cover or settings.DELIGNE.get('COVER', 'translated'))




class DeligneAssembly:

    """
    Čech triple complex K^{i,j,k} of the model: level i of G^•×M, Čech degree j of the
    star cover, slot k of Z → A^0 → A^1 → ... . The total differential is

        D = ∂ + (-1)^i δ + (-1)^{i+j} d̃,   ∂ = Σ_l (-1)^l ∂_l*.

    Spaces and differentials are built per total degree and cached.
    """

    def __init__(self, spec):
        self.spec = spec
        self.action = spec.action
        self.group = spec.action.group
        self.space_ = spec.action.space
        self.N = spec.N
        self.top_slot = spec.top_slot
        self.truncation = spec.truncation
        self.cover = cover_for(spec.action, spec.cover)
        self.corrupted = settings.DELIGNE.get('SIGN_CONVENTION', 'standard') == 'corrupted'
        self._spaces, self._positions, self._maps = {}, {}, {}
        self.counters = {}


    # -- coordinates ---------------------------------------------------------------

    def slot_simplices(self, patch, k):
        if k == 0:
            return [()]
        return patch.star.simplices(k - 1)


    def cells(self, n):
        z_cells, q_cells = [], []
        for i in range(min(n, self.truncation) + 1):
            for copy in self.group.tuples(i):
                for j in range(n - i + 1):
                    k = n - i - j
                    if k > self.top_slot:
                        continue
                    target = z_cells if k == 0 else q_cells
                    for index in self.cover.multi_indices(i, copy, j):
                        patch = self.cover.patch(i, copy, index)
                        for simplex in self.slot_simplices(patch, k):
                            target.append(Cell(i, copy, index, k, simplex))
        return z_cells + q_cells


    def space(self, n):
        space = self._spaces.get(n)
        if space is None:
            if n < 0:
                space = MixedSpace(0, 0)
            else:
                cells = self.cells(n)
                limit = settings.DELIGNE.get('MAX_DIMENSION', 6000)
                if len(cells) > limit:
                    raise ResourceLimitExceeded(
                        f"Total degree {n} has dimension {len(cells)} > {limit}", dimension=len(cells)
                    )
                nZ = sum(1 for cell in cells if cell.slot == 0)
                space = MixedSpace(nZ, len(cells) - nZ, tuple(cells))
                self.counters[n] = {'Z': nZ, 'Q': len(cells) - nZ}
                logger.debug(f"Degree {n}: {nZ} integer and {len(cells) - nZ} rational coordinates")
            self._spaces[n] = space
            self._positions[n] = {cell: k for k, cell in enumerate(space.labels)}
        return space


    def position(self, n, cell):
        self.space(n)
        return self._positions[n].get(cell)


    # -- partial differentials -------------------------------------------------------

    def _slot_images(self, cell):
        patch = self.cover.patch(cell.level, cell.copy, cell.index)
        if cell.slot == 0:
            for v in range(patch.star.n_vertices):
                if patch.star.contains((v,)):
                    yield cell._replace(slot=1, simplex=(v,)), 1
        elif cell.slot < self.top_slot:
            for v in range(patch.star.n_vertices):
                if v in cell.simplex:
                    continue
                sign, coface = permutation_sign((v,) + cell.simplex)
                if patch.star.contains(coface):
                    yield cell._replace(slot=cell.slot + 1, simplex=coface), sign


    def _cech_images(self, cell):
        for (atom,) in self.cover.multi_indices(cell.level, cell.copy, 0):
            if atom in cell.index:
                continue
            index = tuple(sorted(cell.index + (atom,)))
            patch = self.cover.patch(cell.level, cell.copy, index)
            if patch.is_empty:
                continue
            if cell.slot and not patch.star.contains(cell.simplex):
                continue
            yield cell._replace(index=index), (-1) ** index.index(atom)


    def _level_sources(self, cell):

        """ (source cell, coefficient) pairs with (∂c)(cell) = Σ coefficient·c(source). """

        i = cell.level - 1
        for l in range(cell.level + 1):
            sign, index = self.cover.face_index(cell.level, cell.copy, l, cell.index)
            if not sign:
                continue
            perm = self.cover.vertex_map(cell.level, cell.copy, l)
            simplex_sign, simplex = (1, cell.simplex) if perm is None else permutation_sign(perm[v] for v in cell.simplex)
            source = Cell(i, face_copy(self.group, cell.copy, l), index, cell.slot, simplex)
            yield source, (-1) ** l * sign * simplex_sign


    def partial(self, kind, n):

        """ The unsigned partial differential 'level', 'cech' or 'slot' from degree n. """

        key = (kind, n)
        f = self._maps.get(key)
        if f is not None:
            return f
        source, target = self.space(n), self.space(n + 1)
        columns = {}
        if kind == 'level':
            for t, cell in enumerate(target.labels):
                if cell.level == 0:
                    continue
                for source_cell, coefficient in self._level_sources(cell):
                    s = self.position(n, source_cell)
                    if s is None:
                        raise StructuralError(f"Face of {cell} leaves the cover: {source_cell}")
                    axpy(columns.setdefault(s, {}), coefficient, {t: 1})
        else:
            images = self._cech_images if kind == 'cech' else self._slot_images
            for s, cell in enumerate(source.labels):
                column = {}
                for target_cell, coefficient in images(cell):
                    t = self.position(n + 1, target_cell)
                    if t is not None:
                        axpy(column, coefficient, {t: 1})
                columns[s] = column
        f = MixedMap(source, target, columns, check=False)
        self._maps[key] = f
        return f


    def differential(self, n):
        key = ('D', n)
        D = self._maps.get(key)
        if D is not None:
            return D
        if n + 1 > self.truncation:
            raise StructuralError(f"Degree {n + 1} is beyond the truncation {self.truncation}")
        source = self.space(n)
        level, cech, slot = self.partial('level', n), self.partial('cech', n), self.partial('slot', n)
        columns = {}
        for s, cell in enumerate(source.labels):
            j = len(cell.index) - 1
            column = dict(level.column(s))
            axpy(column, 1 if self.corrupted else (-1) ** cell.level, cech.column(s))
            axpy(column, (-1) ** (cell.level + j), slot.column(s))
            columns[s] = column
        D = MixedMap(source, self.space(n + 1), columns)
        self._maps[key] = D
        return D


    def to_mixed_complex(self, lo, hi):

        """ Total degrees lo..hi with their differentials; d∘d = 0 is verified. """

        if hi < lo:
            return MixedComplex({}, {})
        spaces = {n: self.space(n) for n in range(lo, hi + 1)}
        differentials = {n: self.differential(n) for n in range(lo, hi)}
        return MixedComplex(spaces, differentials)


    def apply_D(self, cochain):
        n = cochain.degree
        vector = self.differential(n).apply(cochain.to_vector(self))
        return TripleCochain.from_vector(self, n + 1, vector)


    def column_cells(self, n, level, copy):
        return [k for k, cell in enumerate(self.space(n).labels) if cell.level == level and cell.copy == copy]


    def column_complex(self, level, copy, lo, hi):

        """
        The Čech-Deligne complex of one copy of M at `level`: D restricted to its cells
        (δ and d̃ keep the copy, ∂ leaves it).
        """

        coordinates = {n: self.column_cells(n, level, copy) for n in range(lo, hi + 1)}
        spaces = {n: sub_space(self.space(n), coordinates[n]) for n in range(lo, hi + 1)}
        differentials = {
            n: self.differential(n).restrict(coordinates[n], coordinates[n + 1]) for n in range(lo, hi)
        }
        return MixedComplex(spaces, differentials), coordinates


    def translation(self, g, n):

        """
        Pullback g^* on the level-0 cells of degree n: (g^*c)(A, k, σ) = c(gA, k, gσ) with
        orientation signs. Composes as a right action.
        """

        coordinates = self.column_cells(n, 0, ())
        position = {cell: k for k, cell in enumerate(self.space(n).labels[c] for c in coordinates)}
        columns = {}
        for t, cell in enumerate(self.space(n).labels[c] for c in coordinates):
            index_sign, index = permutation_sign(self._move_atom(g, atom) for atom in cell.index)
            simplex_sign, simplex = self.action.act_oriented(g, cell.simplex) if cell.simplex else (1, ())
            s = position.get(cell._replace(index=index, simplex=simplex))
            if s is None:
                raise StructuralError(f"Translation by {g} leaves the level-0 cells at {cell}")
            columns.setdefault(s, {})[t] = index_sign * simplex_sign
        space = sub_space(self.space(n), coordinates)
        return MixedMap(space, space, columns)


    def _move_atom(self, g, atom):
        if isinstance(atom, tuple):
            return tuple(self.action.vertex(g, v) for v in atom)
        return self.action.vertex(g, atom)


    def __repr__(self):
        return f"DeligneAssembly(N={self.N}, top_slot={self.top_slot}, truncation={self.truncation}, {self.action})"




class TripleCochain:

    """
    Sparse element of the total complex: {Cell: value}, integers on slot 0 and rationals
    elsewhere, all of total degree `degree` = i + j + k.
    """

    def __init__(self, degree, entries=None):
        self.degree = degree
        self.entries = {}
        for cell, value in (entries or {}).items():
            cell = Cell(*cell)
            if cell.level + len(cell.index) - 1 + cell.slot != degree:
                raise StructuralError(f"{cell} does not have total degree {degree}")
            value = Fraction(value)
            if cell.slot == 0 and value.denominator != 1:
                raise StructuralError(f"Non-integral constant {value} at {cell}")
            if value:
                self.entries[cell] = value.numerator if cell.slot == 0 else value


    @classmethod
    def from_vector(cls, assembly, degree, vector):
        labels = assembly.space(degree).labels
        return cls(degree, {labels[k]: v for k, v in vector.items()})


    def to_vector(self, assembly):
        vector = {}
        for cell, value in self.entries.items():
            k = assembly.position(self.degree, cell)
            if k is None:
                raise StructuralError(f"{cell} is not a coordinate of degree {self.degree}")
            vector[k] = value
        return assembly.space(self.degree).validate(vector, 'cochain')


    def component(self, level=None, j=None, slot=None):
        return TripleCochain(self.degree, {
            cell: value for cell, value in self.entries.items()
            if (level is None or cell.level == level)
            and (j is None or len(cell.index) - 1 == j)
            and (slot is None or cell.slot == slot)
        })


    def patch_cochain(self, level, copy, index, slot):

        """ The slot-k part on one patch, as {simplex: value}. """

        return {
            cell.simplex: value for cell, value in self.entries.items()
            if cell.level == level and cell.copy == copy and cell.index == index and cell.slot == slot
        }


    def __add__(self, other):
        if self.degree != other.degree:
            raise StructuralError("Cannot add cochains of different total degrees")
        entries = dict(self.entries)
        axpy(entries, 1, other.entries)
        return TripleCochain(self.degree, entries)


    def __neg__(self):
        return TripleCochain(self.degree, {c: -v for c, v in self.entries.items()})


    def __sub__(self, other):
        return self + (-other)


    def __mul__(self, scalar):
        return TripleCochain(self.degree, {c: v * scalar for c, v in self.entries.items()})


    __rmul__ = __mul__


    def __eq__(self, other):
        return isinstance(other, TripleCochain) and self.degree == other.degree and self.entries == other.entries


    def is_zero(self):
        return not self.entries


    def __repr__(self):
        return f"TripleCochain(degree={self.degree}, nnz={len(self.entries)})"
