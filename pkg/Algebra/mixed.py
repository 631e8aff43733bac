import logging
from fractions import Fraction
from functools import cached_property
from dataclasses import dataclass, field
from Algebra.elimination import axpy, is_integral
from Algebra.exceptions import StructuralError, ChainComplexError




logger = logging.getLogger(__name__)




@dataclass(frozen=True)
class MixedSpace:

    """
    Z^nZ ⊕ Q^nQ. Coordinates 0..nZ-1 are the integer block, nZ..nZ+nQ-1 the rational
    block. `labels` optionally maps every coordinate back to where it came from.
    """

    nZ: int
    nQ: int
    labels: tuple = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        if self.nZ < 0 or self.nQ < 0:
            raise StructuralError(f"Negative dimension ({self.nZ}, {self.nQ})")
        if self.labels and len(self.labels) != self.dim:
            raise StructuralError(f"{len(self.labels)} labels for a space of dimension {self.dim}")


    @property
    def dim(self):
        return self.nZ + self.nQ


    def is_z(self, index):
        return index < self.nZ


    def label(self, index):
        return self.labels[index] if self.labels else index


    def z_coordinates(self):
        return range(self.nZ)


    def q_coordinates(self):
        return range(self.nZ, self.dim)


    def validate(self, vector, name='element'):

        """ Checks coordinates are in range and the integer block is integral. """

        for key, value in vector.items():
            if not 0 <= key < self.dim:
                raise StructuralError(f"{name} has coordinate {key} outside a space of dimension {self.dim}")
            if key < self.nZ and not is_integral(value):
                raise StructuralError(f"{name} has non-integral value {value} on Z-coordinate {self.label(key)}")
        return vector


    def element(self, values):

        """ Builds a sparse element from a dense list (ints first, then rationals). """

        if len(values) != self.dim:
            raise StructuralError(f"Expected {self.dim} values, got {len(values)}")
        vector = {}
        for i, value in enumerate(values):
            if value:
                vector[i] = int(value) if i < self.nZ else Fraction(value)
        return self.validate(vector)


    def unit(self, index):
        return {index: 1 if index < self.nZ else Fraction(1)}




def normalize(vector, space):

    """ Integer block as int, rational block as Fraction, zeros dropped. """

    out = {}
    for key, value in vector.items():
        if value == 0:
            continue
        if key < space.nZ:
            value = Fraction(value)
            if value.denominator != 1:
                raise StructuralError(f"Non-integral value {value} on Z-coordinate {space.label(key)}")
            out[key] = value.numerator
        else:
            out[key] = Fraction(value)
    return out




class MixedMap:

    """
    Homomorphism Z^a ⊕ Q^b → Z^c ⊕ Q^d with blocks A (Z→Z), C (Z→Q), D (Q→Q).
    Stored column-sparse; the Q→Z block must vanish since Q has no nonzero map to a lattice.
    """

    def __init__(self, source, target, columns=None, check=True):
        self.source = source
        self.target = target
        self.columns = {}
        for j, column in (columns or {}).items():
            column = {i: v for i, v in column.items() if v != 0}
            if column:
                self.columns[j] = column
        if check:
            self._validate()


    def _validate(self):
        for j, column in self.columns.items():
            if not 0 <= j < self.source.dim:
                raise StructuralError(f"Column {j} outside source of dimension {self.source.dim}")
            for i, value in column.items():
                if not 0 <= i < self.target.dim:
                    raise StructuralError(f"Row {i} outside target of dimension {self.target.dim}")
                if i < self.target.nZ:
                    if j >= self.source.nZ:
                        raise StructuralError(
                            f"Nonzero Q→Z entry at ({self.target.label(i)}, {self.source.label(j)})"
                        )
                    if not is_integral(value):
                        raise StructuralError(
                            f"Non-integral Z→Z entry {value} at ({self.target.label(i)}, {self.source.label(j)})"
                        )
            self.columns[j] = normalize(column, self.target)


    @classmethod
    def zero(cls, source, target):
        return cls(source, target, {}, check=False)


    @classmethod
    def identity(cls, space):
        return cls(space, space, {j: space.unit(j) for j in range(space.dim)}, check=False)


    @classmethod
    def from_blocks(cls, source, target, A=None, C=None, D=None):

        """
        Builds a map from dense blocks given as nested lists (rows by columns). Missing
        blocks are zero.
        """

        columns = {}

        def put(block, row_offset, col_offset):
            for r, row in enumerate(block or []):
                for c, value in enumerate(row):
                    if value:
                        columns.setdefault(c + col_offset, {})[r + row_offset] = value

        put(A, 0, 0)
        put(C, target.nZ, 0)
        put(D, target.nZ, source.nZ)
        return cls(source, target, columns)


    def column(self, j):
        return self.columns.get(j, {})


    def apply(self, vector):
        out = {}
        for j, value in vector.items():
            column = self.columns.get(j)
            if column:
                axpy(out, value, column)
        return normalize(out, self.target)


    __call__ = apply


    def compose(self, other):

        """ self ∘ other. """

        if other.target != self.source:
            raise StructuralError(f"Cannot compose: {other.target} does not match {self.source}")
        columns = {j: self.apply(column) for j, column in other.columns.items()}
        return MixedMap(other.source, self.target, columns, check=False)


    __matmul__ = compose


    def __add__(self, other):
        if (self.source, self.target) != (other.source, other.target):
            raise StructuralError("Cannot add maps with different source or target")
        columns = {j: dict(c) for j, c in self.columns.items()}
        for j, column in other.columns.items():
            axpy(columns.setdefault(j, {}), 1, column)
        return MixedMap(self.source, self.target, columns, check=False)


    def scaled(self, c):
        return MixedMap(self.source, self.target, {j: {i: c * v for i, v in col.items()} for j, col in self.columns.items()})


    def is_zero(self):
        return not self.columns


    def dense(self):

        """ Dense row-major matrix (small maps only; used in reports and tests). """

        rows = [[0] * self.source.dim for _ in range(self.target.dim)]
        for j, column in self.columns.items():
            for i, value in column.items():
                rows[i][j] = value
        return rows


    def blocks(self):
        dense = self.dense()
        nZs, nZt = self.source.nZ, self.target.nZ
        A = [row[:nZs] for row in dense[:nZt]]
        C = [row[:nZs] for row in dense[nZt:]]
        D = [row[nZs:] for row in dense[nZt:]]
        return A, C, D


    def restrict(self, source_coordinates, target_coordinates):

        """
        The map between coordinate subspaces: inclusion of `source_coordinates`, this map,
        then projection onto `target_coordinates`. Coordinate lists must keep Z before Q.
        """

        source = sub_space(self.source, source_coordinates)
        target = sub_space(self.target, target_coordinates)
        position = {c: k for k, c in enumerate(target_coordinates)}
        columns = {}
        for k, j in enumerate(source_coordinates):
            column = {position[i]: v for i, v in self.column(j).items() if i in position}
            if column:
                columns[k] = column
        return MixedMap(source, target, columns, check=False)


    def __repr__(self):
        return f"MixedMap({self.source.nZ}+{self.source.nQ} -> {self.target.nZ}+{self.target.nQ}, nnz={sum(map(len, self.columns.values()))})"




def sub_space(space, coordinates):
    nZ = sum(1 for c in coordinates if c < space.nZ)
    if any(c < space.nZ for c in coordinates[nZ:]):
        raise StructuralError("Coordinate subsets must list Z-coordinates before Q-coordinates")
    labels = tuple(space.label(c) for c in coordinates) if space.labels else ()
    return MixedSpace(nZ, len(coordinates) - nZ, labels)




class DirectSum:

    """
    Direct sum of mixed spaces, laid out with all Z-blocks first (in summand order) and
    then all Q-blocks, so that the result is again a MixedSpace.
    """

    def __init__(self, spaces):
        self.summands = list(spaces)
        self.z_offsets, self.q_offsets = [], []
        z = q = 0
        for space in self.summands:
            self.z_offsets.append(z)
            self.q_offsets.append(q)
            z += space.nZ
            q += space.nQ
        self.space = MixedSpace(z, q)


    def position(self, k, index):
        space = self.summands[k]
        if index < space.nZ:
            return self.z_offsets[k] + index
        return self.space.nZ + self.q_offsets[k] + index - space.nZ


    def embed(self, k, vector):
        return {self.position(k, i): v for i, v in vector.items()}


    def project(self, k, vector):
        space = self.summands[k]
        out = {}
        for i in range(space.dim):
            value = vector.get(self.position(k, i))
            if value:
                out[i] = value
        return out


    def split(self, vector):
        return [self.project(k, vector) for k in range(len(self.summands))]


    def combine(self, parts):
        out = {}
        for k, part in enumerate(parts):
            out.update(self.embed(k, part))
        return out




def block_map(source_sum, target_sum, blocks):

    """
    Assembles a map between direct sums from {(target_index, source_index): MixedMap}.
    """

    columns = {}
    for (t, s), f in blocks.items():
        if f is None:
            continue
        for j, column in f.columns.items():
            target_column = columns.setdefault(source_sum.position(s, j), {})
            axpy(target_column, 1, target_sum.embed(t, column))
    return MixedMap(source_sum.space, target_sum.space, columns)




class MixedComplex:

    """
    Cochain complex of mixed spaces in degrees lo..hi with d_n: C^n → C^{n+1}.
    d_{n+1}∘d_n = 0 is verified exactly at construction.
    """

    def __init__(self, spaces, differentials, check=True):
        self.spaces = dict(spaces)
        self.differentials = dict(differentials)
        self.lo = min(self.spaces) if self.spaces else 0
        self.hi = max(self.spaces) if self.spaces else -1
        for n, d in self.differentials.items():
            if d.source != self.space(n) or d.target != self.space(n + 1):
                raise StructuralError(f"Differential d_{n} does not fit the spaces of degrees {n}, {n + 1}")
        if check:
            self.check()


    def space(self, n):
        return self.spaces.get(n, MixedSpace(0, 0))


    def differential(self, n):
        d = self.differentials.get(n)
        if d is None:
            return MixedMap.zero(self.space(n), self.space(n + 1))
        return d


    def check(self):
        for n in sorted(self.differentials):
            after = self.differentials.get(n + 1)
            if after is None:
                continue
            for j, column in self.differentials[n].columns.items():
                if after.apply(column):
                    raise ChainComplexError(
                        f"d∘d ≠ 0 from degree {n} (column {self.space(n).label(j)})", degree=n
                    )
        return True


    def dims(self):
        return {n: (s.nZ, s.nQ) for n, s in sorted(self.spaces.items())}


    def __repr__(self):
        return f"MixedComplex({self.dims()})"




@dataclass(frozen=True)
class MixedSubgroup:

    """
    The subgroup ⟨z_gens⟩_Z + ⟨q_gens⟩_Q of a mixed space. q_gens have zero Z-block.
    """

    space: MixedSpace
    z_gens: tuple = ()
    q_gens: tuple = ()

    def __post_init__(self):
        for g in self.q_gens:
            if any(k < self.space.nZ for k in g):
                raise StructuralError("Rational generators must have zero integer block")


    @classmethod
    def zero(cls, space):
        return cls(space)


    @classmethod
    def whole(cls, space):
        return cls(
            space,
            tuple({i: 1} for i in space.z_coordinates()),
            tuple({i: Fraction(1)} for i in space.q_coordinates()),
        )


    def __add__(self, other):
        if self.space != other.space:
            raise StructuralError("Cannot add subgroups of different spaces")
        return MixedSubgroup(self.space, self.z_gens + other.z_gens, self.q_gens + other.q_gens)


    def image(self, f):
        z = tuple(v for v in (f.apply(g) for g in self.z_gens) if v)
        q = tuple(v for v in (f.apply(g) for g in self.q_gens) if v)
        return MixedSubgroup(f.target, z, q)


    def embed(self, space, positions):

        """ Transports generators along an injective coordinate map. """

        move = lambda g: {positions[k]: v for k, v in g.items()}
        return MixedSubgroup(space, tuple(map(move, self.z_gens)), tuple(map(move, self.q_gens)))


    @cached_property
    def basis(self):
        from Algebra.modules import SubgroupBasis
        return SubgroupBasis(self)


    def contains(self, vector):
        return self.basis.coordinates(vector) is not None


    def express(self, vector):
        return self.basis.express(vector)


    def contains_subgroup(self, other):
        return (
            all(self.contains(g) for g in other.z_gens)
            and all(self.basis.contains_line(g) for g in other.q_gens)
        )
