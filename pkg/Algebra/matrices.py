import logging
import numpy as np
from fractions import Fraction
from Algebra.exceptions import StructuralError




logger = logging.getLogger(__name__)




class IntMatrix:

    """
    Exact integer matrix backed by a numpy object array of Python ints, so entries never
    overflow and never become floats.
    """

    def __init__(self, data, rows=None, cols=None):
        if isinstance(data, IntMatrix):
            array = data.array.copy()
        else:
            array = np.array(data, dtype=object)
            if array.size == 0 and (array.ndim != 2 or rows is not None):
                array = np.zeros((rows or 0, cols or 0), dtype=object)
        if array.ndim != 2:
            raise StructuralError(f"IntMatrix needs a 2-dimensional array, got {array.ndim} dimensions")

        for index, value in np.ndenumerate(array):
            if isinstance(value, Fraction):
                if value.denominator != 1:
                    raise StructuralError(f"Non-integral entry {value} at {index}")
                value = value.numerator
            array[index] = int(value)
        self.array = array


    @classmethod
    def zeros(cls, rows, cols):
        return cls(np.zeros((rows, cols), dtype=object), rows, cols)


    @classmethod
    def identity(cls, n):
        matrix = cls.zeros(n, n)
        for i in range(n):
            matrix.array[i, i] = 1
        return matrix


    @classmethod
    def from_rows(cls, rows, cols):
        matrix = cls.zeros(len(rows), cols)
        for i, row in enumerate(rows):
            for j, value in enumerate(row):
                matrix.array[i, j] = int(value)
        return matrix


    @property
    def shape(self):
        return self.array.shape


    @property
    def rows(self):
        return self.array.shape[0]


    @property
    def cols(self):
        return self.array.shape[1]


    def __getitem__(self, key):
        return self.array[key]


    def __matmul__(self, other):
        if self.cols != other.rows:
            raise StructuralError(f"Cannot multiply {self.shape} by {other.shape}")
        if self.cols == 0:
            return IntMatrix.zeros(self.rows, other.cols)
        return IntMatrix(self.array.dot(other.array))


    def __eq__(self, other):
        if not isinstance(other, IntMatrix):
            other = IntMatrix(other)
        return self.shape == other.shape and self.tolist() == other.tolist()


    def __repr__(self):
        return f"IntMatrix({self.tolist()})"


    @property
    def T(self):
        return IntMatrix(self.array.T.copy(), self.cols, self.rows)


    def tolist(self):
        return [[int(x) for x in row] for row in self.array]


    def column(self, j):
        return {i: int(v) for i, v in enumerate(self.array[:, j]) if v != 0}


    def is_diagonal(self):
        return all(v == 0 for (i, j), v in np.ndenumerate(self.array) if i != j)


    def diagonal(self):
        return [int(self.array[i, i]) for i in range(min(self.shape))]


    def determinant(self):

        """ Fraction-free Bareiss elimination. """

        if self.rows != self.cols:
            raise StructuralError(f"Determinant of a non-square {self.shape} matrix")
        n = self.rows
        if n == 0:
            return 1
        a = self.tolist()
        sign, previous = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // previous
            previous = a[k][k]
        return sign * a[n - 1][n - 1]


    def is_unimodular(self):
        return self.rows == self.cols and abs(self.determinant()) == 1




class _SmithState:

    # Row operations act on S and U (and, inversely, on U_inv); column operations on S and V.

    def __init__(self, matrix):
        self.m, self.n = matrix.shape
        self.S = matrix.tolist()
        self.U = IntMatrix.identity(self.m).tolist()
        self.U_inv = IntMatrix.identity(self.m).tolist()
        self.V = IntMatrix.identity(self.n).tolist()


    def add_row(self, target, source, c):
        if c == 0:
            return
        for M in (self.S, self.U):
            row_s, row_t = M[source], M[target]
            for j in range(len(row_t)):
                row_t[j] += c * row_s[j]
        for row in self.U_inv:
            row[source] -= c * row[target]


    def swap_rows(self, a, b):
        if a == b:
            return
        for M in (self.S, self.U):
            M[a], M[b] = M[b], M[a]
        for row in self.U_inv:
            row[a], row[b] = row[b], row[a]


    def negate_row(self, a):
        for M in (self.S, self.U):
            M[a] = [-x for x in M[a]]
        for row in self.U_inv:
            row[a] = -row[a]


    def add_col(self, target, source, c):
        if c == 0:
            return
        for M in (self.S, self.V):
            for row in M:
                row[target] += c * row[source]


    def swap_cols(self, a, b):
        if a == b:
            return
        for M in (self.S, self.V):
            for row in M:
                row[a], row[b] = row[b], row[a]




def smith_normal_form(matrix, with_inverse=False):

    """
    Smith normal form over Z.

    Args:
    matrix (IntMatrix | nested list): any m×n integer matrix.
    with_inverse (bool): also return U⁻¹, used to read off generators of a cokernel.

    Returns:
    (U, S, V) or (U, S, V, U_inv) with U·A·V = S, U and V unimodular, S diagonal with
    nonnegative entries s1 | s2 | ... .
    """

    matrix = matrix if isinstance(matrix, IntMatrix) else IntMatrix(matrix)
    state = _SmithState(matrix)
    S, m, n = state.S, state.m, state.n

    t = 0
    while t < min(m, n):
        candidates = [(abs(S[i][j]), i, j) for i in range(t, m) for j in range(t, n) if S[i][j] != 0]
        if not candidates:
            break
        _, i, j = min(candidates)
        state.swap_rows(t, i)
        state.swap_cols(t, j)

        while True:
            settled = True
            for i in range(t + 1, m):
                if S[i][t] != 0:
                    state.add_row(i, t, -(S[i][t] // S[t][t]))
                    if S[i][t] != 0:
                        state.swap_rows(t, i)
                        settled = False
            for j in range(t + 1, n):
                if S[t][j] != 0:
                    state.add_col(j, t, -(S[t][j] // S[t][t]))
                    if S[t][j] != 0:
                        state.swap_cols(t, j)
                        settled = False
            if not settled:
                continue

            pivot = S[t][t]
            offender = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if S[i][j] % pivot != 0),
                None,
            )
            if offender is None:
                break
            state.add_row(t, offender, 1)

        if S[t][t] < 0:
            state.negate_row(t)
        t += 1

    U = IntMatrix.from_rows(state.U, m) if m else IntMatrix.zeros(0, 0)
    D = IntMatrix.from_rows(S, n) if m else IntMatrix.zeros(0, n)
    V = IntMatrix.from_rows(state.V, n) if n else IntMatrix.zeros(0, 0)
    if with_inverse:
        U_inv = IntMatrix.from_rows(state.U_inv, m) if m else IntMatrix.zeros(0, 0)
        return U, D, V, U_inv
    return U, D, V




def elementary_divisors(matrix):
    _, S, _ = smith_normal_form(matrix)
    return [d for d in S.diagonal() if d != 0]
