import logging
from dataclasses import dataclass, field
from Algebra.cohomology import solve_mixed, NoSolution
from Algebra.exceptions import PreconditionError, StructuralError
from Deligne.assembly import ModelSpec, TripleCochain
from Deligne.engine import assemble
from Deligne.group_cohomology import group_cohomology, coefficient_module
from Deligne.spectral import LevelFiltration
from Geometry.cocycles import GeomCocycle, KINDS, complete_cocycle, group_cochain_cocycle




logger = logging.getLogger(__name__)




def restrict_to_level_zero(cocycle):

    """ The underlying ordinary cocycle on M: the level-0 part, equivariance forgotten. """

    cochain = cocycle.cochain if isinstance(cocycle, GeomCocycle) else cocycle
    return cochain.component(level=0)


def _require_level_zero_cocycle(assembly, cochain):
    if any(cell.level for cell in cochain.entries):
        raise PreconditionError("Expected a cochain supported on level 0", code='degree')
    boundary = assembly.apply_D(cochain)
    if any(cell.level == 0 for cell in boundary.entries):
        raise PreconditionError("Not a cocycle of the level-0 Čech-Deligne complex", code='not_cocycle')




def extend_to_equivariant(kind, action, cochain):

    """
    Solves for the data on levels ≥ 1 that makes an ordinary cocycle equivariant.

    Returns:
    GeomCocycle restricting to `cochain` on level 0, or the NoSolution certificate.
    """

    N = KINDS[kind][0]
    assembly = assemble(ModelSpec(action, N, (N, N)))
    _require_level_zero_cocycle(assembly, cochain)
    extension = complete_cocycle(assembly, cochain, lambda cell: cell.level >= 1)
    if isinstance(extension, NoSolution):
        return extension
    return GeomCocycle(kind, action, extension)




@dataclass
class ObstructionReport:

    """
    Staged obstructions to making an ordinary cocycle equivariant. Stage r evaluates d_r on
    the class in E_r^{r, N+1-r}; later stages are only reached when earlier ones vanish.
    """

    kind: str
    stages: list = field(default_factory=list)
    extension: object = None

    @property
    def extendable(self):
        return self.extension is not None


    def obstruction(self, r):
        for stage in self.stages:
            if stage['page'] == r:
                return stage
        return None




def obstructions(kind, action, cochain):

    """
    Runs the obstruction stages for a level-0 cocycle x of total degree n = N + 1. At stage r
    the running lift x_r has D x_r ∈ F^r; its class in E_r^r is the r-th obstruction. When it
    vanishes some y ∈ F^1 has D(x_r - y) ∈ F^{r+1}, and x_{r+1} = x_r - y.

    Raises:
    PreconditionError: if the cochain is not a level-0 cocycle.
    """

    N = KINDS[kind][0]
    n = N + 1
    assembly = assemble(ModelSpec(action, N, (N, N + 1)))
    _require_level_zero_cocycle(assembly, cochain)
    filtration = LevelFiltration(assembly)
    report = ObstructionReport(kind)
    source = filtration.coordinates(n, 1)
    D = assembly.differential(n)
    current = cochain.to_vector(assembly)

    for r in range(1, n + 2):
        boundary = D.apply(current)
        if not boundary:
            break
        target = filtration.coordinates(n + 1, 0, r + 1)
        position = {k: t for t, k in enumerate(target)}
        rhs = {position[k]: v for k, v in boundary.items() if k in position}
        solution = solve_mixed(D.restrict(source, target), rhs)
        stage = {'page': r, 'position': (r, n - r), 'vanishes': not isinstance(solution, NoSolution)}
        if r <= n:
            page = filtration.page(r, r, n + 1)
            coordinates = page.decode(boundary)
            stage['class'] = {g.name: str(v) for g, v in coordinates.nonzero(page.generators)}
            stage['group'] = str(page.module)
            report.stages.append(stage)
        elif isinstance(solution, NoSolution):
            raise StructuralError(f"Obstruction past the last page at degree {n}")
        if isinstance(solution, NoSolution):
            logger.info(f"{kind} obstruction at page {r}: {stage.get('class')}")
            return report
        for k, value in solution.items():
            current[source[k]] = current.get(source[k], 0) - value
        current = {k: v for k, v in current.items() if v}

    report.extension = GeomCocycle(kind, action, TripleCochain.from_vector(assembly, n, current))
    return report


def obstruction_bundle(action, cochain):
    return obstructions('bundle', action, cochain)


def obstruction_gerbe(action, cochain):
    return obstructions('gerbe', action, cochain)




@dataclass
class LiftingTorsor:

    """
    The equivariant structures on a fixed level-0 bundle form a torsor under
    H^1_group(G, H^0(M, T)); `act` modifies the level-1 data by a character.
    """

    module: object
    base: GeomCocycle

    def act(self, values):
        return self.base + group_cochain_cocycle('bundle', self.base.action, values)




def lifting_torsor(action, cocycle):
    module = group_cohomology(coefficient_module(action, 1, 0), 1)
    logger.debug(f"Lifting torsor of a bundle on {action}: {module}")
    return LiftingTorsor(module, cocycle)
