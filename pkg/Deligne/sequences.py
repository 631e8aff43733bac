import logging
from dataclasses import dataclass, field
from Algebra.mixed import MixedMap, MixedComplex, MixedSubgroup, DirectSum, block_map, sub_space
from Algebra.modules import MixedModule
from Algebra.cohomology import kernel, image, cohomology_at
from Algebra.exceptions import StructuralError
from Deligne.assembly import ModelSpec
from Deligne.engine import assemble, equivariant_deligne
from Deligne.borel import equivariant_integral_cohomology, quotient_cohomology
from Deligne.invariants import invariant_forms, extended_spec




logger = logging.getLogger(__name__)

KINDS = ('integral', 'forms', 'equivariant_cohomology', 'invariant_forms')




@dataclass
class ExactnessReport:

    """
    Outcome of one exact-sequence verification. `terms` lists the computed groups in
    sequence order, `checks` the composite and kernel/image tests at every position and
    `identifications` the comparisons with independently computed groups.
    """

    kind: str
    N: int
    window: tuple
    terms: list = field(default_factory=list)
    checks: list = field(default_factory=list)
    identifications: list = field(default_factory=list)

    @property
    def exact(self):
        return all(c['composite_zero'] and c['kernel_in_image'] for c in self.checks) and all(
            i['equal'] for i in self.identifications
        )


    def failures(self):
        out = [c['position'] for c in self.checks if not (c['composite_zero'] and c['kernel_in_image'])]
        return out + [i['name'] for i in self.identifications if not i['equal']]


    def identify(self, name, computed, expected):
        self.identifications.append({
            'name': name, 'computed': str(computed), 'expected': str(expected), 'equal': computed == expected,
        })




def _inclusion(source_coordinates, target_space, target_coordinates):
    position = {c: k for k, c in enumerate(target_coordinates)}
    source = sub_space(target_space, source_coordinates)
    target = sub_space(target_space, target_coordinates)
    return MixedMap(source, target, {k: target.unit(position[c]) for k, c in enumerate(source_coordinates)})


def _projection(source_coordinates, space, target_coordinates):
    position = {c: k for k, c in enumerate(target_coordinates)}
    source = sub_space(space, source_coordinates)
    target = sub_space(space, target_coordinates)
    columns = {k: target.unit(position[c]) for k, c in enumerate(source_coordinates) if c in position}
    return MixedMap(source, target, columns)




class SubcomplexSequence:

    """
    The long exact sequence of 0 → S → C → C/S → 0 for a subcomplex S of the total complex
    spanned by the cells selected by `predicate`:

        H^n(S) → H^n(C) → H^n(C/S) → H^{n+1}(S) → ...

    for n in lo..hi. The connecting map is D on the coordinate section of C/S, read in S.
    """

    def __init__(self, assembly, predicate, lo, hi):
        if lo < 1:
            raise StructuralError(f"Sequences start in total degree 1 or later, got {lo}")
        self.assembly = assembly
        self.lo, self.hi = lo, hi
        self.coordinates = {}
        for n in range(lo - 1, hi + 3):
            labels = assembly.space(n).labels
            inside = [k for k, cell in enumerate(labels) if predicate(cell)]
            outside = [k for k, cell in enumerate(labels) if not predicate(cell)]
            self.coordinates[n] = (list(range(len(labels))), inside, outside)
        for n in range(lo - 1, hi + 2):
            leak = assembly.differential(n).restrict(self.coordinates[n][1], self.coordinates[n + 1][2])
            if not leak.is_zero():
                raise StructuralError(f"Selected cells are not a subcomplex in degree {n}")
        self.complexes = {name: self._complex(which) for which, name in enumerate(('total', 'sub', 'quotient'))}


    def _complex(self, which):
        degrees = range(self.lo - 1, self.hi + 3)
        spaces = {n: sub_space(self.assembly.space(n), self.coordinates[n][which]) for n in degrees}
        differentials = {
            n: self.assembly.differential(n).restrict(self.coordinates[n][which], self.coordinates[n + 1][which])
            for n in degrees if n + 1 in spaces
        }
        return MixedComplex(spaces, differentials)


    def inclusion(self, n):
        full, inside, _ = self.coordinates[n]
        return _inclusion(inside, self.assembly.space(n), full)


    def projection(self, n):
        full, _, outside = self.coordinates[n]
        return _projection(full, self.assembly.space(n), outside)


    def connecting(self, n):
        return self.assembly.differential(n).restrict(self.coordinates[n][2], self.coordinates[n + 1][1])


    def positions(self):

        """ (name, source complex, chain map, target complex, source degree, target degree). """

        out = []
        for n in range(self.lo, self.hi + 1):
            out.append((f"H^{n}(sub)->H^{n}(total)", 'sub', self.inclusion(n), 'total', n, n))
            out.append((f"H^{n}(total)->H^{n}(quotient)", 'total', self.projection(n), 'quotient', n, n))
            out.append((f"H^{n}(quotient)->H^{n + 1}(sub)", 'quotient', self.connecting(n), 'sub', n, n + 1))
        return out


    def module(self, name, n):
        return cohomology_at(self.complexes[name], n).module


    def _cycles(self, name, n):
        return kernel(self.complexes[name].differential(n))


    def _boundaries(self, name, n):
        return image(self.complexes[name].differential(n - 1))


    def _preimage_of_boundaries(self, name, n, f, target, m):

        """ {a ∈ Z^n(name) : f(a) ∈ B^m(target)}, found as the kernel of (a, y) ↦ (Da, f(a) - Dy). """

        source = self.complexes[name]
        tgt = self.complexes[target]
        left = DirectSum([source.space(n), tgt.space(m - 1)])
        right = DirectSum([source.space(n + 1), tgt.space(m)])
        phi = block_map(left, right, {
            (0, 0): source.differential(n),
            (1, 0): f,
            (1, 1): tgt.differential(m - 1).scaled(-1),
        })
        solutions = kernel(phi)
        project = lambda g: left.project(0, g)
        return MixedSubgroup(
            source.space(n),
            tuple(v for v in map(project, solutions.z_gens) if v),
            tuple(v for v in map(project, solutions.q_gens) if v),
        )


    def check(self):

        """
        For every stretch X --f--> Y --g--> Z of the sequence: g∘f sends the cycles of X into
        the boundaries of Z, and every cycle of Y that g sends to a boundary lies in
        f(Z(X)) + B(Y).
        """

        positions = self.positions()
        results = []
        for (name, src, f, mid, n_src, n_mid), (_, _, g, dst, _, n_dst) in zip(positions, positions[1:]):
            cycles = self._cycles(src, n_src)
            composite_zero = self._boundaries(dst, n_dst).contains_subgroup(cycles.image(g @ f))
            kernel_of_g = self._preimage_of_boundaries(mid, n_mid, g, dst, n_dst)
            image_of_f = cycles.image(f) + self._boundaries(mid, n_mid)
            results.append({
                'position': name.split('->')[1],
                'composite_zero': composite_zero,
                'kernel_in_image': image_of_f.contains_subgroup(kernel_of_g),
            })
        return results




def _window_terms(sequence, report):
    for n in range(sequence.lo, sequence.hi + 1):
        for name in ('sub', 'total', 'quotient'):
            report.terms.append({'term': f"H^{n}({name})", 'module': str(sequence.module(name, n))})


def _invariant_form_quotient(action, N, m):

    """ H^m of the invariant forms A^1(M)^G → ... → A^N(M)^G placed in degrees 1..N. """

    if m < 1 or m > N:
        return MixedModule()
    top = invariant_forms(action, m)
    rank = top.dimension if m == N else len(top.closed)
    if m >= 2:
        below = invariant_forms(action, m - 1)
        rank -= below.dimension - len(below.closed)
    return MixedModule(rank_q=rank)




def verify_exact_sequence(action, N, kind, window=(0, 2), cover=None):

    """
    Verifies one of the exact sequences relating F̄(N) to integral cohomology and invariant
    forms on the Deligne degrees of `window`.

    Returns:
    ExactnessReport; `exact` is False if any composite, kernel/image or identification test fails.
    """

    if kind not in KINDS:
        raise StructuralError(f"Unknown exact sequence {kind!r}; choose one of {', '.join(KINDS)}")
    m_lo, m_hi = window
    report = ExactnessReport(kind, N, tuple(window))

    if kind == 'equivariant_cohomology':
        for m in range(m_lo, m_hi + 1):
            if m == N:
                continue
            computed = equivariant_deligne(action, N, m, cover).group
            if m > N:
                report.identify(f"H^{m}(F̄({N})) = H^{m + 1}_G(M;Z)", computed,
                                equivariant_integral_cohomology(action, m + 1, 'Z'))
                if action.is_free():
                    report.identify(f"H^{m + 1}_G(M;Z) = H^{m + 1}(M/G;Z)",
                                    equivariant_integral_cohomology(action, m + 1, 'Z'),
                                    quotient_cohomology(action, m + 1))
            else:
                report.identify(f"H^{m}(F̄({N})) = H^{m}_G(M;T)", computed,
                                equivariant_integral_cohomology(action, m, 'T'))
        logger.info(f"Sequence {kind} for N={N}: {'exact' if report.exact else report.failures()}")
        return report

    if kind == 'integral':
        assembly = assemble(ModelSpec(action, N, (m_lo, m_hi + 1), cover=cover))
        sequence = SubcomplexSequence(assembly, lambda cell: cell.slot >= 2, m_lo + 1, m_hi + 1)
        report.checks.extend(sequence.check())
        _window_terms(sequence, report)
        for m in range(m_lo, m_hi + 1):
            report.identify(f"H^{m}(forms)", sequence.module('sub', m + 1), _invariant_form_quotient(action, N, m))
            if m >= 1:
                report.identify(f"H^{m}(T) = H^{m + 1}_G(M;Z)", sequence.module('quotient', m + 1),
                                equivariant_integral_cohomology(action, m + 1, 'Z'))
    else:
        if kind == 'invariant_forms':
            m_lo, m_hi = N, N
            report.window = (N, N)
        assembly = assemble(extended_spec(action, N, (m_lo, m_hi + 1), cover))
        sequence = SubcomplexSequence(assembly, lambda cell: cell.slot >= N + 2, m_lo + 1, m_hi + 1)
        report.checks.extend(sequence.check())
        _window_terms(sequence, report)
        for m in range(m_lo, m_hi + 1):
            report.identify(f"H^{m}(π⁻¹T) = H^{m}_G(M;T)", sequence.module('total', m + 1),
                            equivariant_integral_cohomology(action, m, 'T'))
        if m_lo <= N <= m_hi:
            closed = len(invariant_forms(action, N + 1).closed)
            report.identify(f"H^{N + 1}(slots ≥ {N + 2}) = A^{N + 1}(M)^G_cl",
                            sequence.module('sub', N + 2), MixedModule(rank_q=closed))
    logger.info(f"Sequence {kind} for N={N}: {'exact' if report.exact else report.failures()}")
    return report
