import logging
from Facades.base_facade import BaseFacade
from Deligne.engine import equivariant_deligne
from Deligne.spectral import spectral_sequence
from Deligne.sequences import verify_exact_sequence







logger = logging.getLogger(__name__)



class CohomologyFacade(BaseFacade):

    """ compute, spectral and verify: the cohomology groups, their spectral sequence and the exact sequences. """

    tasks = ('compute', 'spectral', 'verify')


    def compute(self, problem):

        """
        H^m(G^•×M, F̄(N)) for every m of the window.

        Returns:
            ({m: {group, generators}}, True)
        """

        N = problem.parameters['N']
        m_lo, m_hi = problem.parameters['window']
        results = self.parallel(lambda m: equivariant_deligne(problem.action, N, m), range(m_lo, m_hi + 1))
        degrees = {}
        for result in results:
            degrees[result.degree] = {'group': result.group, 'generators': result.generators}
            self.record_timing(f"m={result.degree}", result.timing())
        return {'N': N, 'cohomology': degrees}, True



    def spectral(self, problem):
        N = problem.parameters['N']
        window = problem.parameters['window']
        sequence = spectral_sequence(problem.action, N, problem.parameters['max_page'], window)
        consistent = {m: sequence.is_consistent(m) for m in range(window[0], window[1] + 1)}
        if not all(consistent.values()):
            logger.warning(f"E_∞ disagrees with the total cohomology in degrees {[m for m, ok in consistent.items() if not ok]}")
        results = {
            'N': N,
            'pages': {r: sequence.page(r).as_table() for r in range(1, len(sequence.pages) + 1)},
            'infinity': sequence.infinity.as_table(),
            'totals': sequence.totals,
            'consistent': consistent,
        }
        return results, all(consistent.values())



    def verify(self, problem):

        """
        Verifies one exact sequence; a failed composite, kernel/image or identification test
        makes the report unverified.
        """

        report = verify_exact_sequence(
            problem.action, problem.parameters['N'], problem.parameters['sequence'], problem.parameters['window'],
        )
        results = {
            'sequence': report.kind,
            'N': report.N,
            'window': list(report.window),
            'terms': report.terms,
            'checks': report.checks,
            'identifications': report.identifications,
            'exact': report.exact,
            'failures': report.failures(),
        }
        return results, report.exact
