import logging
from django.conf import settings
from Facades.base_facade import BaseFacade
from Geometry.cocycles import GeomCocycle
from Geometry.classify import GeometricClassifier
from Geometry.obstructions import obstructions
from Geometry.twists import twist_gerbe, twist_orbit, discrete_torsion







logger = logging.getLogger(__name__)



class ClassificationFacade(BaseFacade):

    """ classify, obstruct and twist: equivariant bundles and gerbes with connection, at the cocycle level. """

    tasks = ('classify', 'obstruct', 'twist')


    def classify(self, problem):

        """
        Validates a bundle or gerbe cocycle and, when valid, reports its class, curvature and
        flatness. With a second cocycle `other` the isomorphism verdict is added: a witness
        cochain when the two are isomorphic, a certificate otherwise.

        Returns:
            (results, valid): an invalid cocycle is reported with its violated conditions.
        """

        kind = problem.parameters['kind']
        classifier = GeometricClassifier(problem.action, kind)
        cocycle = GeomCocycle(kind, problem.action, problem.parameters['cocycle'])
        outcome = classifier.validate(cocycle)
        if not outcome.ok:
            logger.warning(f"{kind} cocycle violates {outcome.conditions()}")
            return {'kind': kind, 'valid': False, 'violations': outcome.violations}, False

        flatness = classifier.flat_test(cocycle)
        results = {
            'kind': kind,
            'valid': True,
            'class': classifier.classify(cocycle),
            'curvature': flatness.curvature,
            'flat': flatness.flat,
        }
        self.record_timing(f"N={classifier.N}", classifier.result.timing())

        other = problem.parameters.get('other')
        if other is not None:
            other = GeomCocycle(kind, problem.action, other)
            second = classifier.validate(other)
            if not second.ok:
                results['other'] = {'valid': False, 'violations': second.violations}
                return results, False
            verdict = classifier.isomorphic(cocycle, other)
            results['isomorphic'] = bool(verdict)
            results['isomorphism'] = verdict
        return results, True



    def obstruct(self, problem):

        """
        Staged obstructions to an equivariant structure on an ordinary cocycle. Nonvanishing
        obstructions are a result, not a failed check.
        """

        kind = problem.parameters['kind']
        report = obstructions(kind, problem.action, problem.parameters['cocycle'])
        results = {
            'kind': kind,
            'stages': report.stages,
            'extendable': report.extendable,
        }
        if report.extension is not None:
            results['extension'] = report.extension
        logger.info(f"{kind} obstruction stages: {[s['vanishes'] for s in report.stages]}")
        return results, True



    def twist(self, problem):

        """
        With `gamma`, twists the gerbe by that group 2-cocycle and compares classes; without,
        reports the orbit of the gerbe under all discrete-torsion twists.
        """

        action = problem.action
        cocycle = problem.parameters.get('cocycle')
        cocycle = GeomCocycle('gerbe', action, cocycle) if cocycle is not None else GeomCocycle.zero('gerbe', action)
        torsion = discrete_torsion(action.group).module
        gamma = problem.parameters.get('gamma')

        if gamma is not None:
            outcome = twist_gerbe(action, cocycle, gamma)
            verdict = GeometricClassifier(action, 'gerbe').isomorphic(outcome.twisted, cocycle)
            results = {
                'discrete_torsion': torsion,
                'before': outcome.before,
                'after': outcome.after,
                'changed': outcome.changed,
                'isomorphism': verdict,
            }
            return results, True

        bound = problem.parameters.get('bound') or settings.DELIGNE.get('DENOMINATOR_BOUND', 8)
        orbit = twist_orbit(action, cocycle, bound)
        results = {
            'discrete_torsion': torsion,
            'bound': bound,
            'orbit': orbit,
            'orbit_size': len(orbit),
        }
        return results, True
